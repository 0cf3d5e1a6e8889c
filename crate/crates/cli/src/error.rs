use std::path::PathBuf;

use thiserror::Error;

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
    #[error("input: {0}")]
    Input(String),
    #[error("range: n must lie in 6..=64 with from <= to, got {from}..={to}")]
    Range { from: u64, to: u64 },
    #[error("embed: unknown eigenvalue {0}")]
    UnknownEigenvalue(f64),
    #[error(transparent)]
    Core(#[from] crg_core::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type CliResult<T> = Result<T, CliError>;

/// Maps a module error into the crate-level error that names its origin.
pub fn core<E: Into<crg_core::Error>>(e: E) -> CliError {
    CliError::Core(e.into())
}
