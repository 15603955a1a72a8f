use std::path::PathBuf;

use thiserror::Error;

/// Failures of a command run, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] levyqm_core::Error),

    #[error("{0}")]
    Usage(String),

    #[error("degenerate spectrum: {0}")]
    Degenerate(String),

    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot encode JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(levyqm_core::Error::DegenerateRoot { .. }) | CliError::Degenerate(_) => 3,
            CliError::Core(_) | CliError::Usage(_) => 2,
            CliError::Io { .. } | CliError::Json(_) => 4,
        }
    }
}
