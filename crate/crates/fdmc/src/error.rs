use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    /// A solver was asked to run outside its precondition (e.g. the
    /// large-fairlet solver on an instance with a small fairlet size).
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
