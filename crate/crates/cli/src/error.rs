use std::path::PathBuf;

use fockvortex::CoreError;
use thiserror::Error;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NON_CONVERGENCE: i32 = 3;
pub const EXIT_INVARIANT: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {field}: {reason}")]
    Usage { field: String, reason: String },

    #[error("{0}")]
    NonConvergence(String),

    #[error("invariant failure: {0}")]
    Invariant(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl CliError {
    pub fn usage(field: impl Into<String>, reason: impl Into<String>) -> Self {
        CliError::Usage {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage { .. } => EXIT_USAGE,
            CliError::NonConvergence(_) => EXIT_NON_CONVERGENCE,
            CliError::Invariant(_) => EXIT_INVARIANT,
            CliError::Io { .. } | CliError::Json { .. } => 1,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidParameter { name, reason } => CliError::usage(name, reason),
            CoreError::UndefinedRatio => CliError::usage("r", e.to_string()),
            CoreError::MalformedState(_) => CliError::usage("state", e.to_string()),
            CoreError::EigenNonConvergence { .. } | CoreError::GridTooCoarse { .. } => {
                CliError::NonConvergence(e.to_string())
            }
            CoreError::CoefficientMismatch { .. } => CliError::Invariant(e.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
