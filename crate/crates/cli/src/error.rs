use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error("assumption violated: {0}")]
    Assumption(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("cannot write {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error(transparent)]
    Core(#[from] qrwave::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use qrwave::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Assumption(_) => 3,
            CliError::Verification(_) => 4,
            CliError::Io { .. } => 5,
            CliError::Core(e) => match e {
                E::InvalidArgument(_) | E::BasisMismatch => 2,
                E::Assumption(_) => 3,
                E::Range(_) | E::Overflow { .. } | E::Unstable { .. } | E::Divergence { .. } => 4,
            },
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
