//! Parity games: recursive solving with memoryless strategies, attractors,
//! a brute-force oracle and an independent solution checker.
//!
//! Player II wins a play when the least color seen infinitely often is even.

use std::fmt;
use std::fmt::Write as _;

use crate::arena::ParityGame;
use crate::error::{Error, Result};
use crate::graph::{coreachable, min_color_cycles};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Player {
    I,
    II,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::I => Player::II,
            Player::II => Player::I,
        }
    }

    /// The player favored by a color as the least recurring one.
    pub fn of_color(c: u32) -> Player {
        if c.is_multiple_of(2) {
            Player::II
        } else {
            Player::I
        }
    }

    fn losing_parity(self) -> u32 {
        match self {
            Player::I => 0,
            Player::II => 1,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::I => "I",
            Player::II => "II",
        })
    }
}

/// Winning regions with memoryless strategies. `choice[v]` is the edge label
/// taken at `v`, defined exactly when `v` belongs to its owner's region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub winner: Vec<Player>,
    pub choice: Vec<Option<u8>>,
}

impl Solution {
    pub fn region(&self, p: Player) -> Vec<bool> {
        self.winner.iter().map(|&w| w == p).collect()
    }

    /// Text listing `vertex winner [edge-label]`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (v, w) in self.winner.iter().enumerate() {
            match self.choice[v] {
                Some(b) => writeln!(s, "{v} {w} {b}").unwrap(),
                None => writeln!(s, "{v} {w}").unwrap(),
            }
        }
        s
    }
}

fn predecessors(g: &ParityGame) -> Vec<Vec<usize>> {
    let mut pred = vec![Vec::new(); g.len()];
    for (v, s) in g.succ.iter().enumerate() {
        for &t in s {
            pred[t].push(v);
        }
    }
    pred
}

/// Attractor inside `mask`; newly attracted vertices of `player` get the
/// lowest edge label leading into the set.
fn attract(
    g: &ParityGame,
    pred: &[Vec<usize>],
    mask: &[bool],
    target: &[bool],
    player: Player,
    choice: &mut [Option<u8>],
) -> Vec<bool> {
    let n = g.len();
    let mut inside = vec![false; n];
    let mut left: Vec<usize> = (0..n)
        .map(|v| g.succ[v].iter().filter(|&&t| mask[t]).count())
        .collect();
    let mut queue = std::collections::VecDeque::new();
    for v in 0..n {
        if mask[v] && target[v] {
            inside[v] = true;
            queue.push_back(v);
        }
    }
    while let Some(w) = queue.pop_front() {
        for &v in &pred[w] {
            if !mask[v] || inside[v] {
                continue;
            }
            if g.owner[v] == player {
                let b = (0..2).find(|&b| inside[g.succ[v][b]]).unwrap();
                choice[v] = Some(b as u8);
                inside[v] = true;
                queue.push_back(v);
            } else {
                left[v] -= 1;
                if left[v] == 0 {
                    inside[v] = true;
                    queue.push_back(v);
                }
            }
        }
    }
    inside
}

/// Least set containing `target` into which `player` can force the play,
/// with the forcing edge label for each attracted vertex of `player`.
pub fn attractor(g: &ParityGame, target: &[bool], player: Player) -> (Vec<bool>, Vec<Option<u8>>) {
    let mut choice = vec![None; g.len()];
    let mask = vec![true; g.len()];
    let set = attract(g, &predecessors(g), &mask, target, player, &mut choice);
    (set, choice)
}

struct Zielonka<'a> {
    g: &'a ParityGame,
    pred: Vec<Vec<usize>>,
    choice: Vec<Option<u8>>,
}

impl Zielonka<'_> {
    /// Region of Player II inside `mask` (a trap for both players' escapes).
    fn solve(&mut self, mask: &[bool]) -> Vec<bool> {
        let g = self.g;
        let n = g.len();
        let Some(m) = (0..n).filter(|&v| mask[v]).map(|v| g.color[v]).min() else {
            return vec![false; n];
        };
        let p = Player::of_color(m);
        let target: Vec<bool> = (0..n).map(|v| mask[v] && g.color[v] == m).collect();
        for v in 0..n {
            if target[v] && g.owner[v] == p {
                let b = (0..2).find(|&b| mask[g.succ[v][b]]).unwrap();
                self.choice[v] = Some(b as u8);
            }
        }
        let a = attract(g, &self.pred, mask, &target, p, &mut self.choice);
        let sub: Vec<bool> = (0..n).map(|v| mask[v] && !a[v]).collect();
        let sub_ii = self.solve(&sub);
        let won_by = |ii: &[bool], v: usize, who: Player| {
            if ii[v] {
                who == Player::II
            } else {
                who == Player::I
            }
        };
        let opp = p.opponent();
        let opp_region: Vec<bool> = (0..n).map(|v| sub[v] && won_by(&sub_ii, v, opp)).collect();
        if !opp_region.contains(&true) {
            return (0..n).map(|v| mask[v] && p == Player::II).collect();
        }
        let b = attract(g, &self.pred, mask, &opp_region, opp, &mut self.choice);
        let rest: Vec<bool> = (0..n).map(|v| mask[v] && !b[v]).collect();
        let rest_ii = self.solve(&rest);
        (0..n)
            .map(|v| {
                if b[v] {
                    opp == Player::II
                } else {
                    rest[v] && rest_ii[v]
                }
            })
            .collect()
    }
}

/// Recursive solver. Ties between equally good edges go to the lower label.
pub fn solve(g: &ParityGame) -> Solution {
    let mut z = Zielonka {
        g,
        pred: predecessors(g),
        choice: vec![None; g.len()],
    };
    let ii = z.solve(&vec![true; g.len()]);
    let winner: Vec<Player> = ii
        .iter()
        .map(|&b| if b { Player::II } else { Player::I })
        .collect();
    let choice = (0..g.len())
        .map(|v| {
            if g.owner[v] == winner[v] {
                z.choice[v]
            } else {
                None
            }
        })
        .collect();
    Solution { winner, choice }
}

pub const BRUTE_FORCE_LIMIT: usize = 14;

/// Vertices from which `player`, fixing `choice` on its own vertices, wins
/// against every opponent behavior.
fn wins_with(g: &ParityGame, player: Player, choice: &[u8]) -> Vec<bool> {
    let adj: Vec<Vec<usize>> = (0..g.len())
        .map(|v| {
            if g.owner[v] == player {
                vec![g.succ[v][choice[v] as usize]]
            } else {
                g.succ[v].to_vec()
            }
        })
        .collect();
    let bad = min_color_cycles(&adj, &g.color, player.losing_parity());
    coreachable(&adj, &bad).into_iter().map(|b| !b).collect()
}

/// Best uniform memoryless strategy for `player` by exhaustive enumeration.
fn enumerate(g: &ParityGame, player: Player) -> (Vec<bool>, Vec<u8>) {
    let own: Vec<usize> = (0..g.len()).filter(|&v| g.owner[v] == player).collect();
    let mut best: Option<(Vec<bool>, Vec<u8>)> = None;
    let mut union = vec![false; g.len()];
    let mut per_strategy = Vec::new();
    for mask in 0u32..1 << own.len() {
        let mut choice = vec![0u8; g.len()];
        for (i, &v) in own.iter().enumerate() {
            choice[v] = (mask >> i & 1) as u8;
        }
        let won = wins_with(g, player, &choice);
        for v in 0..g.len() {
            union[v] |= won[v];
        }
        per_strategy.push((won, choice));
    }
    for (won, choice) in per_strategy {
        if won == union {
            best = Some((won, choice));
            break;
        }
    }
    best.expect("parity games admit uniform memoryless strategies")
}

/// Oracle solver for small games: enumerate every memoryless strategy of
/// each player and check the cycles of the remaining one-player graph.
pub fn brute_force_solve(g: &ParityGame) -> Result<Solution> {
    if g.len() > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            vertices: g.len(),
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let (ii, sigma_ii) = enumerate(g, Player::II);
    let (i, sigma_i) = enumerate(g, Player::I);
    let winner: Vec<Player> = (0..g.len())
        .map(|v| {
            assert!(
                ii[v] != i[v],
                "regions of a parity game partition the vertices"
            );
            if ii[v] {
                Player::II
            } else {
                Player::I
            }
        })
        .collect();
    let choice = (0..g.len())
        .map(|v| match (g.owner[v], winner[v]) {
            (Player::II, Player::II) => Some(sigma_ii[v]),
            (Player::I, Player::I) => Some(sigma_i[v]),
            _ => None,
        })
        .collect();
    Ok(Solution { winner, choice })
}

/// Whether each region is closed under its winner's strategy against all
/// opponent moves and every cycle there has the winner's parity.
pub fn verify_solution(g: &ParityGame, s: &Solution) -> bool {
    let n = g.len();
    if s.winner.len() != n || s.choice.len() != n {
        return false;
    }
    for v in 0..n {
        let owns = g.owner[v] == s.winner[v];
        match s.choice[v] {
            Some(b) if owns && b < 2 => {}
            None if !owns => {}
            _ => return false,
        }
    }
    for p in [Player::I, Player::II] {
        let mut adj = vec![Vec::new(); n];
        for v in (0..n).filter(|&v| s.winner[v] == p) {
            let edges: Vec<usize> = match s.choice[v] {
                Some(b) => vec![g.succ[v][b as usize]],
                None => g.succ[v].to_vec(),
            };
            if edges.iter().any(|&t| s.winner[t] != p) {
                return false;
            }
            adj[v] = edges;
        }
        if min_color_cycles(&adj, &g.color, p.losing_parity()).contains(&true) {
            return false;
        }
    }
    true
}
