//! Seeded random generators for automata, words, games and machines. Used by
//! the test suites and the `selftest` command.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arena::ParityGame;
use crate::omega::{Dpa, Lasso, Letter, Nba};
use crate::solver::Player;
use crate::strategy::{CMachine, SCMachine};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn lasso<R: Rng>(rng: &mut R, width: usize, max_prefix: usize, max_cycle: usize) -> Lasso {
    let bound = 1u32 << width;
    let pre = rng.gen_range(0..=max_prefix);
    let cyc = rng.gen_range(1..=max_cycle.max(1));
    let mut letter = || rng.gen_range(0..bound) as Letter;
    let prefix = (0..pre).map(|_| letter()).collect();
    let cycle = (0..cyc).map(|_| letter()).collect();
    Lasso {
        width,
        prefix,
        cycle,
    }
}

/// `count` lassos of the given width; always includes the constant words.
pub fn lasso_samples(width: usize, count: usize, seed: u64) -> Vec<Lasso> {
    let mut r = rng(seed);
    let mut out = vec![
        Lasso {
            width,
            prefix: vec![],
            cycle: vec![0],
        },
        Lasso {
            width,
            prefix: vec![],
            cycle: vec![(1u32 << width) - 1],
        },
    ];
    while out.len() < count {
        out.push(lasso(&mut r, width, 4, 4));
    }
    out.truncate(count.max(1));
    out
}

pub fn dpa<R: Rng>(rng: &mut R, width: usize, states: usize, colors: u32) -> Dpa {
    let states = states.max(1);
    let delta = (0..states << width)
        .map(|_| rng.gen_range(0..states) as u32)
        .collect();
    let color = (0..states)
        .map(|_| rng.gen_range(0..colors.max(1)))
        .collect();
    Dpa::new(width, delta, color, 0).expect("generated automaton is well formed")
}

/// Random Büchi automaton; each (state, letter) pair gets up to `fanout`
/// successors (possibly none).
pub fn nba<R: Rng>(rng: &mut R, width: usize, states: usize, fanout: usize, accept: f64) -> Nba {
    let states = states.max(1);
    let succ = (0..states << width)
        .map(|_| {
            let k = rng.gen_range(0..=fanout);
            (0..k).map(|_| rng.gen_range(0..states) as u32).collect()
        })
        .collect();
    let accepting = (0..states).map(|_| rng.gen_bool(accept)).collect();
    Nba::new(width, succ, accepting, 0).expect("generated automaton is well formed")
}

/// Random game with two labeled edges per vertex and colors below `colors`.
pub fn game<R: Rng>(rng: &mut R, vertices: usize, colors: u32) -> ParityGame {
    let n = vertices.max(1);
    let owner = (0..n)
        .map(|_| {
            if rng.gen_bool(0.5) {
                Player::I
            } else {
                Player::II
            }
        })
        .collect();
    let succ = (0..n)
        .map(|_| [rng.gen_range(0..n), rng.gen_range(0..n)])
        .collect();
    let color = (0..n).map(|_| rng.gen_range(0..colors.max(1))).collect();
    ParityGame::new(owner, succ, color, 0).expect("generated game is well formed")
}

fn machine_tables<R: Rng>(rng: &mut R, states: usize, outputs: usize) -> (Vec<u32>, Vec<bool>) {
    let n = states.max(1);
    let next = (0..2 * n).map(|_| rng.gen_range(0..n) as u32).collect();
    let out = (0..outputs).map(|_| rng.gen_bool(0.5)).collect();
    (next, out)
}

pub fn cmachine<R: Rng>(rng: &mut R, states: usize) -> CMachine {
    let (next, out) = machine_tables(rng, states, 2 * states.max(1));
    CMachine::new(next, out, 0).expect("generated machine is well formed")
}

pub fn scmachine<R: Rng>(rng: &mut R, states: usize) -> SCMachine {
    let (next, out) = machine_tables(rng, states, states.max(1));
    SCMachine::new(next, out, 0).expect("generated machine is well formed")
}
