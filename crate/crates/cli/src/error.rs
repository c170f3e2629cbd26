use std::path::PathBuf;

use thiserror::Error;

/// Failures that end a run with exit code 1. Bound violations are not
/// errors; they are recorded as failed verdicts.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid scenario: {0}")]
    Config(String),
    #[error("unknown builtin `{name}`; available: {available}")]
    UnknownBuiltin { name: String, available: String },
    #[error(transparent)]
    Core(#[from] nearrep_core::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;
