use thiserror::Error;

/// Errors raised by the sequence-space operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid term: {0}")]
    InvalidTerm(String),
    #[error("invalid exponent: {0}")]
    InvalidExponent(String),
    #[error("shape error: {0}")]
    ShapeError(String),
    #[error("precondition not met: {0}")]
    PreconditionNotMet(String),
    #[error("wrong branch: {0}")]
    WrongBranch(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors caused by the caller's input rather than a numerical failure.
    pub fn is_precondition(&self) -> bool {
        !matches!(self, Error::Parse(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
