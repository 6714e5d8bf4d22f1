use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] ddforge_core::Error),

    #[error("cannot write {path}: {source}")]
    Output { path: PathBuf, source: std::io::Error },
}

impl CliError {
    /// 2 for anything the config file can fix, 3 when the backend fails,
    /// 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        use ddforge_core::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Core(E::Backend(_) | E::TooManyQubits { .. }) => 3,
            CliError::Core(_) => 2,
            CliError::Output { .. } => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
