pub mod arena;
pub mod corpus;
pub mod definability;
pub mod error;
pub mod formula;
pub mod gen;
pub mod graph;
pub mod mso;
pub mod omega;
pub mod predicate;
pub mod solver;
pub mod spec;
pub mod strategy;
pub mod synthesis;

pub use error::{Error, Result};
