use thiserror::Error;

use crate::format::ParseError;
use crate::model::Violation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown probe id {0}")]
    UnknownProbe(usize),

    #[error("invalid token {0:?}")]
    InvalidToken(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },

    #[error(transparent)]
    Violation(#[from] Violation),

    #[error("empty metric")]
    EmptyMetric,

    #[error("edge {0} is not an edge of the tree")]
    UnknownEdge(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An exact solver ran out of its explicit search budget. Never a wrong answer.
    #[error("oracle infeasible: {0}")]
    Infeasible(String),

    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T> = std::result::Result<T, Error>;
