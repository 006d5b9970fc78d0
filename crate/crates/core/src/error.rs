use thiserror::Error;

use crate::diagram::ArcId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("arc incidence violated for arcs {arcs:?}")]
    Incidence { arcs: Vec<ArcId> },
    #[error("diagram has genus {0}; a spherical diagram is required")]
    NotSpherical(usize),
    #[error("invalid diagram: {0}")]
    Invalid(String),
    #[error("too many crossings: {0} (limit 63)")]
    TooLarge(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("manifest error on line {line}: {msg}")]
    Manifest { line: usize, msg: String },
    #[error("mixed crossing counts in class set: {0:?}")]
    MixedCrossingCounts(Vec<usize>),
    #[error("structural error: {0}")]
    Structural(String),
    #[error("internal invariant failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
