use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Exit code for re-verification mismatches under `--check`.
pub const EXIT_MISMATCH: i32 = 3;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Error)]
pub enum CliError {
    /// `reason` is a short fixed phrase such as `x in lp`.
    #[error("{reason}: {detail}")]
    Precondition { reason: String, detail: String },
    #[error("check mismatch: {0}")]
    Mismatch(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("io: {}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Core(#[from] seqlab::Error),
}

impl CliError {
    pub fn precondition(reason: &str, detail: impl Into<String>) -> Self {
        CliError::Precondition { reason: reason.into(), detail: detail.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Precondition { .. } => EXIT_PRECONDITION,
            CliError::Mismatch(_) => EXIT_MISMATCH,
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io { .. } => EXIT_INTERNAL,
            CliError::Core(e) if e.is_precondition() => EXIT_PRECONDITION,
            CliError::Core(_) => EXIT_INTERNAL,
        }
    }

    /// One line, `reason: detail`, for the error stream.
    pub fn reason_line(&self) -> String {
        self.to_string().replace('\n', " ")
    }
}
