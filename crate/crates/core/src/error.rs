use thiserror::Error;

/// Failure modes shared by every operation in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("validation error: {0}")]
    Validation(String),
    #[error("numeric error: {0}")]
    Numeric(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("orbit mismatch: {0}")]
    OrbitMismatch(String),
    #[error("not majorized: {0}")]
    NotMajorized(String),
    #[error("size guard: {0}")]
    SizeGuard(String),
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn validation(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}
