use std::path::PathBuf;

use czirok::{ModelError, StabilityError, StatsError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error at `{field}`: {reason}")]
    Config { field: String, reason: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: malformed table: {reason}")]
    Table { path: PathBuf, reason: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Stability(#[from] StabilityError),
    #[error(transparent)]
    Stats(#[from] StatsError),
}

impl HarnessError {
    pub fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        HarnessError::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn is_config(&self) -> bool {
        matches!(self, HarnessError::Config { .. })
    }
}
