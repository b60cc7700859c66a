use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// The estimator is not defined at this dimension.
    #[error("invalid dimension: n = {n}, estimator requires {requirement}")]
    InvalidDimension { n: usize, requirement: String },

    /// Malformed input data (non-finite values, non-positive sigma, bad partition, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Experiment, figure or CLI configuration that cannot be honoured.
    #[error("config error: {0}")]
    Config(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the command-line tool.
    ///
    /// 1 for configuration or input errors, 2 for numeric failures and 3 for I/O errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) | Error::Config(_) => 1,
            Error::InvalidDimension { .. } | Error::Numeric(_) => 2,
            Error::Io { .. } => 3,
        }
    }
}
