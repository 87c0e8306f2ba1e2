use std::fmt;

use crate::solver::Player;

/// A position in specification source text, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: Pos, msg: String },

    #[error("unbound variable `{name}` at {pos}")]
    Unbound { name: String, pos: Pos },

    #[error("role conflict for `{name}`: {msg}")]
    RoleConflict { name: String, msg: String },

    #[error("alphabet width mismatch: expected {expected}, found {found}")]
    WidthMismatch { expected: usize, found: usize },

    #[error("track {track} out of range for width {width}")]
    TrackOutOfRange { track: usize, width: usize },

    #[error("alphabet width {width} exceeds the limit of {limit} tracks")]
    WidthLimit { width: usize, limit: usize },

    #[error("{what} exceeded the state cap of {limit}")]
    Capacity { what: &'static str, limit: usize },

    #[error("parameter `{0}` is not bound")]
    UnboundParameter(String),

    #[error("variable `{0}` already occurs in the formula")]
    NameClash(String),

    #[error("free variables {found:?} do not match the track assignment {expected:?}")]
    TrackAssignment {
        expected: Vec<String>,
        found: Vec<String>,
    },

    #[error("initial vertex is not won by player {0}")]
    NotWinner(Player),

    #[error("machine output contradicts the selection formula at position {position}")]
    Inconsistent { position: usize },

    #[error("game has {vertices} vertices; brute force is limited to {limit}")]
    TooLarge { vertices: usize, limit: usize },

    #[error("malformed {what}: {msg}")]
    Malformed { what: &'static str, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn malformed(what: &'static str, msg: impl Into<String>) -> Self {
        Error::Malformed {
            what,
            msg: msg.into(),
        }
    }
}
