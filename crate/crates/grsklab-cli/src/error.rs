use std::path::PathBuf;
use thiserror::Error;

/// Exit code for a successful run.
pub const EXIT_OK: u8 = 0;
/// Exit code for computational failures (non-convergence, failed verification).
pub const EXIT_FAILURE: u8 = 1;
/// Exit code for invalid input (flags, files, preconditions).
pub const EXIT_INVALID: u8 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or input detected by the command line itself.
    #[error("invalid input: {0}")]
    Invalid(String),
    /// An input file could not be parsed; the message carries line/column.
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("cannot write output: {0}")]
    Output(String),
    #[error(transparent)]
    Library(#[from] grsklab::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) | CliError::Parse { .. } | CliError::Io { .. } => EXIT_INVALID,
            CliError::Output(_) => EXIT_FAILURE,
            CliError::Library(e) if e.is_validation() => EXIT_INVALID,
            CliError::Library(_) => EXIT_FAILURE,
        }
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        CliError::Invalid(msg.into())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
