//! Finite game arenas for a specification automaton and a periodic parameter.
//!
//! Positions of the infinite arena are (state, n). The transition and the
//! parameter bit depend on `n` only through its phase in the parameter's
//! prefix/period structure, so positions are quotiented by phase.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::omega::Dpa;
use crate::predicate::UpPredicate;
use crate::solver::Player;

/// What a vertex stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Vertex {
    /// Player I is about to choose the X bit.
    Choose { q: usize, phase: usize },
    /// Player II answers the X bit `x` with a Y bit.
    Respond { q: usize, x: bool, phase: usize },
    /// Vertex of a game without arena structure.
    Plain,
}

/// Game where every vertex has two outgoing edges labeled 0 and 1.
#[derive(Clone, Debug)]
pub struct ParityGame {
    pub owner: Vec<Player>,
    pub succ: Vec<[usize; 2]>,
    pub color: Vec<u32>,
    pub init: usize,
    pub vertex: Vec<Vertex>,
}

/// Phase structure of a prefix/period word: phases `0..span`, wrapping to
/// the prefix length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Phases {
    bits: Vec<bool>,
    loop_start: usize,
}

impl Phases {
    pub fn new(p: &UpPredicate) -> Self {
        let bits = p.prefix().iter().chain(p.period()).copied().collect();
        Phases {
            bits,
            loop_start: p.prefix().len(),
        }
    }

    pub fn span(&self) -> usize {
        self.bits.len()
    }

    pub fn next(&self, i: usize) -> usize {
        if i + 1 < self.bits.len() {
            i + 1
        } else {
            self.loop_start
        }
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bits[i]
    }

    /// Phase of position `n`.
    pub fn of(&self, n: usize) -> usize {
        if n < self.loop_start {
            n
        } else {
            self.loop_start + (n - self.loop_start) % (self.bits.len() - self.loop_start)
        }
    }
}

/// Letter of the (X, Y, P) alphabet.
pub fn letter(x: bool, y: bool, c: bool) -> u32 {
    x as u32 | (y as u32) << 1 | (c as u32) << 2
}

impl ParityGame {
    pub fn new(
        owner: Vec<Player>,
        succ: Vec<[usize; 2]>,
        color: Vec<u32>,
        init: usize,
    ) -> Result<Self> {
        let n = owner.len();
        if succ.len() != n || color.len() != n || init >= n.max(1) {
            return Err(Error::malformed("game", "inconsistent vertex tables"));
        }
        if succ.iter().flatten().any(|&t| t >= n) {
            return Err(Error::malformed("game", "edge target out of range"));
        }
        Ok(ParityGame {
            owner,
            succ,
            color,
            init,
            vertex: vec![Vertex::Plain; n],
        })
    }

    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        self.succ.iter().map(|s| s.to_vec()).collect()
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph arena {\n");
        for v in 0..self.len() {
            let shape = match self.owner[v] {
                Player::I => "box",
                Player::II => "ellipse",
            };
            let name = match self.vertex[v] {
                Vertex::Choose { q, phase } => format!("({q},{phase})"),
                Vertex::Respond { q, x, phase } => format!("({q},{},{phase})", x as u8),
                Vertex::Plain => format!("{v}"),
            };
            let style = if v == self.init { ",style=bold" } else { "" };
            writeln!(
                s,
                "  v{v} [shape={shape},label=\"{name}\\ncolor {}\"{style}];",
                self.color[v]
            )
            .unwrap();
            for b in 0..2 {
                writeln!(s, "  v{v} -> v{} [label=\"{b}\"];", self.succ[v][b]).unwrap();
            }
        }
        s.push_str("}\n");
        s
    }

    /// Colors seen along the play where each player follows the given
    /// memoryless choice.
    pub fn play_colors(&self, choice: impl Fn(usize) -> bool, steps: usize) -> Vec<u32> {
        let mut v = self.init;
        (0..steps)
            .map(|_| {
                let c = self.color[v];
                v = self.succ[v][choice(v) as usize];
                c
            })
            .collect()
    }
}

/// The phase-quotiented arena of `a` (tracks X, Y, P) and `p`, restricted to
/// vertices reachable from the initial one.
pub fn build_arena(a: &Dpa, p: &UpPredicate) -> Result<ParityGame> {
    if a.width() != 3 {
        return Err(Error::WidthMismatch {
            expected: 3,
            found: a.width(),
        });
    }
    let phases = Phases::new(&p.canonicalize());
    let mut index: HashMap<Vertex, usize> = HashMap::new();
    let mut order: Vec<Vertex> = Vec::new();
    let start = Vertex::Choose {
        q: a.init(),
        phase: 0,
    };
    index.insert(start, 0);
    order.push(start);
    let mut succ = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let targets = match order[i] {
            Vertex::Choose { q, phase } => [false, true].map(|x| Vertex::Respond { q, x, phase }),
            Vertex::Respond { q, x, phase } => [false, true].map(|y| Vertex::Choose {
                q: a.next(q, letter(x, y, phases.bit(phase))),
                phase: phases.next(phase),
            }),
            Vertex::Plain => unreachable!(),
        };
        let ids = targets.map(|t| {
            let len = order.len();
            *index.entry(t).or_insert_with(|| {
                order.push(t);
                len
            })
        });
        succ.push(ids);
        i += 1;
    }
    let owner = order
        .iter()
        .map(|v| match v {
            Vertex::Choose { .. } => Player::I,
            _ => Player::II,
        })
        .collect();
    let color = order
        .iter()
        .map(|v| match *v {
            Vertex::Choose { q, .. } | Vertex::Respond { q, .. } => a.color(q),
            Vertex::Plain => unreachable!(),
        })
        .collect();
    Ok(ParityGame {
        owner,
        succ,
        color,
        init: 0,
        vertex: order,
    })
}

/// Colors of the play on the unquotiented arena: positions carry the true
/// index `n` and the parameter bit is read from `p` directly. Each player
/// move is `choose(state, n, x)` with `x = None` for Player I.
pub fn simulate_unfolded(
    a: &Dpa,
    p: &UpPredicate,
    choose: impl Fn(usize, usize, Option<bool>) -> bool,
    steps: usize,
) -> Vec<u32> {
    let mut colors = Vec::with_capacity(steps);
    let mut q = a.init();
    let mut n = 0;
    let mut pending: Option<bool> = None;
    while colors.len() < steps {
        colors.push(a.color(q));
        match pending {
            None => pending = Some(choose(q, n, None)),
            Some(x) => {
                let y = choose(q, n, Some(x));
                q = a.next(q, letter(x, y, p.bit_at(n)));
                n += 1;
                pending = None;
            }
        }
    }
    colors
}
