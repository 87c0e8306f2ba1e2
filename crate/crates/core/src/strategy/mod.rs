//! Finite-state operators: extraction from solved arenas, execution on
//! ultimately periodic words, fixed points, and exact verification.

mod machine;
mod synth;

pub use machine::{run_on_lasso, sc_fixed_point, trace, CMachine, Machine, Operator, SCMachine};
pub use synth::{
    cross_play, strategy_to_cmachine, strategy_to_scmachine, verify_machine_against_dpa, CrossPlay,
};
