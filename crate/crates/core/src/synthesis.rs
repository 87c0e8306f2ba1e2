//! End-to-end synthesis for one specification automaton and parameter.

use crate::arena::{build_arena, ParityGame};
use crate::error::Result;
use crate::omega::Dpa;
use crate::predicate::UpPredicate;
use crate::solver::{solve, Player, Solution};
use crate::strategy::{
    strategy_to_cmachine, strategy_to_scmachine, verify_machine_against_dpa, Machine,
};

#[derive(Clone, Debug)]
pub struct Synthesis {
    pub game: ParityGame,
    pub solution: Solution,
    pub winner: Player,
    /// Operator of the winner: causal for II, strongly causal for I.
    pub machine: Machine,
}

/// Solve the game of `spec` (tracks X, Y, P) under `p` and extract the
/// winner's operator.
pub fn synthesize(spec: &Dpa, p: &UpPredicate) -> Result<Synthesis> {
    let game = build_arena(spec, p)?;
    let solution = solve(&game);
    let winner = solution.winner[game.init];
    let machine = match winner {
        Player::II => Machine::C(strategy_to_cmachine(&game, &solution)?),
        Player::I => Machine::Sc(strategy_to_scmachine(&game, &solution)?),
    };
    Ok(Synthesis {
        game,
        solution,
        winner,
        machine,
    })
}

impl Synthesis {
    /// Exact check of the extracted operator against the specification.
    pub fn verify(&self, spec: &Dpa, p: &UpPredicate) -> Result<bool> {
        verify_machine_against_dpa(&self.machine, spec, p, self.winner)
    }
}
