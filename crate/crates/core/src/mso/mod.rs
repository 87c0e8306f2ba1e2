//! Translation of formulas into automata over track alphabets.
//!
//! Each free variable owns one bit of the letter. Atoms become small
//! deterministic automata, conjunctions stay deterministic while one side
//! has a weak, Büchi or co-Büchi condition, existential blocks are
//! eliminated variable by variable through projection, and negation
//! determinizes.

mod compile;
mod machine;

pub use compile::Compiler;
pub use machine::machine_to_formula;

use crate::error::Result;
use crate::formula::Formula;
use crate::omega::{Dpa, Lasso};

/// [`Compiler::compile`] with default limits.
pub fn compile(f: &Formula, order: &[&str]) -> Result<Dpa> {
    Compiler::default().compile(f, order)
}

/// [`Compiler::model_check`] with default limits.
pub fn model_check(f: &Formula, params: &[(&str, &Lasso)]) -> Result<bool> {
    Compiler::default().model_check(f, params)
}
