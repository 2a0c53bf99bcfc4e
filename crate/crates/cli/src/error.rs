use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] flatorb_core::Error),
    #[error("{origin}:{line}:{column}: {message}\n  {line} | {context}")]
    Parse { origin: String, line: usize, column: usize, message: String, context: String },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// Every input problem maps to exit status 2.
    pub fn exit_code(&self) -> u8 {
        crate::commands::EXIT_INPUT
    }
}

pub type CliResult<T> = Result<T, CliError>;
