use std::path::PathBuf;

/// Failure of a command, carrying its exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{}: {reason}", path.display())]
    Input { path: PathBuf, reason: String },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("{failed} of {total} gated checks failed")]
    ChecksFailed { failed: usize, total: usize },
    #[error("{}: {source}", path.display())]
    Output {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Numeric(#[from] opmono_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Input { .. } | CliError::Output { .. } => 2,
            CliError::Dimension(_) => 3,
            CliError::Numeric(opmono_core::Error::DimensionMismatch { .. }) => 3,
            CliError::ChecksFailed { .. } => 4,
            CliError::Numeric(_) => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
