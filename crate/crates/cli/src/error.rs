use std::path::Path;

use thiserror::Error;

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Domain(#[from] covasym::Error),

    #[error("scale L = {requested} is outside the usable window; the largest admissible L is {admissible:.6}")]
    ScaleTooLarge { requested: f64, admissible: f64 },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    /// 2 for configuration and domain errors, 3 for failed checks, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Domain(_) | CliError::ScaleTooLarge { .. } => 2,
            CliError::Verification(_) => 3,
            CliError::Io { .. } | CliError::Json(_) => 1,
        }
    }
}
