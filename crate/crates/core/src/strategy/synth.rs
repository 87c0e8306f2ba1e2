use std::collections::HashMap;

use super::machine::{run_on_lasso, sc_fixed_point, CMachine, Machine, SCMachine};
use super::Operator;
use crate::arena::{letter, ParityGame, Phases};
use crate::error::{Error, Result};
use crate::graph::min_color_cycles;
use crate::omega::{Dpa, Lasso};
use crate::predicate::UpPredicate;
use crate::solver::{Player, Solution};

/// Player-I vertices reachable from the initial one when `step` resolves a
/// vertex and an input bit to the next player-I vertex.
fn collect(g: &ParityGame, step: impl Fn(usize, bool) -> usize) -> (Vec<usize>, Vec<u32>) {
    let mut index = HashMap::from([(g.init, 0usize)]);
    let mut order = vec![g.init];
    let mut next = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        for a in [false, true] {
            let t = step(v, a);
            let len = order.len();
            let id = *index.entry(t).or_insert_with(|| {
                order.push(t);
                len
            });
            next.push(id as u32);
        }
        i += 1;
    }
    (order, next)
}

fn chosen(s: &Solution, v: usize) -> usize {
    s.choice[v].expect("winner moves inside its region") as usize
}

/// Causal operator of Player II's strategy: read X at a choice vertex, answer
/// with the strategy's Y edge.
pub fn strategy_to_cmachine(g: &ParityGame, s: &Solution) -> Result<CMachine> {
    if s.winner[g.init] != Player::II {
        return Err(Error::NotWinner(Player::II));
    }
    let respond = |v: usize, a: bool| g.succ[v][a as usize];
    let (order, next) = collect(g, |v, a| {
        let w = respond(v, a);
        g.succ[w][chosen(s, w)]
    });
    let out = order
        .iter()
        .flat_map(|&v| [false, true].map(|a| chosen(s, respond(v, a)) == 1))
        .collect();
    Ok(CMachine::new(next, out, 0)?.minimize())
}

/// Strongly causal operator of Player I's strategy: emit the strategy's X
/// bit, then read Y.
pub fn strategy_to_scmachine(g: &ParityGame, s: &Solution) -> Result<SCMachine> {
    if s.winner[g.init] != Player::I {
        return Err(Error::NotWinner(Player::I));
    }
    let (order, next) = collect(g, |v, y| {
        let w = g.succ[v][chosen(s, v)];
        g.succ[w][y as usize]
    });
    let out = order.iter().map(|&v| chosen(s, v) == 1).collect();
    Ok(SCMachine::new(next, out, 0)?.minimize())
}

/// Exact check that `m`, playing for `side`, wins the game of `spec` (tracks
/// X, Y, P) under parameter `p` against every opponent behavior: every cycle
/// of the product of machine, automaton and phase has the right parity.
pub fn verify_machine_against_dpa(
    m: &Machine,
    spec: &Dpa,
    p: &UpPredicate,
    side: Player,
) -> Result<bool> {
    if spec.width() != 3 {
        return Err(Error::WidthMismatch {
            expected: 3,
            found: spec.width(),
        });
    }
    match (m, side) {
        (Machine::C(_), Player::II) | (Machine::Sc(_), Player::I) => {}
        _ => {
            return Err(Error::malformed(
                "machine",
                format!("a {} machine cannot play for player {side}", m.kind()),
            ))
        }
    }
    let phases = Phases::new(&p.canonicalize());
    type Node = (usize, usize, usize);
    let start: Node = (m.start(), spec.init(), 0);
    let mut index: HashMap<Node, usize> = HashMap::from([(start, 0)]);
    let mut order = vec![start];
    let mut adj: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let (qm, qa, ph) = order[i];
        let c = phases.bit(ph);
        let mut out = Vec::with_capacity(2);
        for adversary in [false, true] {
            // The machine reads the adversary's bit in both roles.
            let (own, qm2) = m.step(qm, adversary);
            let l = match side {
                Player::II => letter(adversary, own, c),
                Player::I => letter(own, adversary, c),
            };
            let t = (qm2, spec.next(qa, l), phases.next(ph));
            let len = order.len();
            out.push(*index.entry(t).or_insert_with(|| {
                order.push(t);
                len
            }));
        }
        adj.push(out);
        i += 1;
    }
    let color: Vec<u32> = order.iter().map(|&(_, q, _)| spec.color(q)).collect();
    let losing = match side {
        Player::I => 0,
        Player::II => 1,
    };
    Ok(!min_color_cycles(&adj, &color, losing).contains(&true))
}

/// Outcome of playing a claimed Player-II operator against a claimed
/// Player-I operator on their common fixed point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossPlay {
    pub x: Lasso,
    pub y: Lasso,
    /// Whether the specification holds on (x, y, P).
    pub spec_holds: bool,
    /// The player whose claim the play contradicts.
    pub refuted: Player,
}

/// With `h = g ∘ f` strongly causal, `x = h(x)` is its fixed point and
/// `y = f(x)` satisfies `x = g(y)`, so (x, y) is a play consistent with both
/// claims and exactly one of them fails on it.
pub fn cross_play(f: &CMachine, g: &SCMachine, spec: &Dpa, p: &UpPredicate) -> Result<CrossPlay> {
    if spec.width() != 3 {
        return Err(Error::WidthMismatch {
            expected: 3,
            found: spec.width(),
        });
    }
    let h = g.compose_after(f);
    let x = sc_fixed_point(&h);
    let y = run_on_lasso(f, &x)?;
    debug_assert!(run_on_lasso(g, &y)?.same_word(&x));
    let param = p.to_lasso();
    let spec_holds = spec.accepts(&Lasso::zip(&[&x, &y, &param]))?;
    Ok(CrossPlay {
        x,
        y,
        spec_holds,
        refuted: if spec_holds { Player::I } else { Player::II },
    })
}
