use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Library(#[from] lacunary::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },

    /// Some outputs were written, others hit a resource budget.
    #[error("partial results: {0}")]
    Partial(String),

    #[error("{0} bound check(s) violated")]
    Violated(usize),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    /// 0 success, 1 violated bound, 2 usage, 3 overflow, 4 partial.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Violated(_) => 1,
            CliError::Usage(_) | CliError::Format { .. } => 2,
            CliError::Library(e) => match e {
                lacunary::Error::Overflow(_) => 3,
                lacunary::Error::ResourceExceeded { .. } => 4,
                lacunary::Error::VerificationFailed(_) => 1,
                lacunary::Error::InvalidInput(_) => 2,
            },
            CliError::Partial(_) => 4,
            CliError::Io { .. } => 2,
        }
    }

    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }
}
