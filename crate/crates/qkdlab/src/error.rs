use rfiqkd_core::QkdError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Estimation(QkdError),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

impl LabError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Config(_) => 2,
            LabError::Estimation(_) => 3,
            LabError::Io { .. } | LabError::Csv(_) => 1,
        }
    }

    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        LabError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

impl From<QkdError> for LabError {
    fn from(e: QkdError) -> Self {
        match e {
            QkdError::Config(msg) => LabError::Config(msg),
            other => LabError::Estimation(other),
        }
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
