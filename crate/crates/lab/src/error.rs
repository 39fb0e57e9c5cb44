use std::path::PathBuf;

use lrs_core::Error;

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Usage(String),
    #[error("thread pool: {0}")]
    Pool(String),
}

pub type LabResult<T> = Result<T, LabError>;

impl LabError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        LabError::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 for exhausted resources, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Core(e) if e.is_resource() => 2,
            _ => 1,
        }
    }
}

impl From<csv::Error> for LabError {
    fn from(e: csv::Error) -> Self {
        LabError::Parse(e.to_string())
    }
}
