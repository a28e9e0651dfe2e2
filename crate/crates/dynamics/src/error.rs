use std::path::PathBuf;

/// Failures of a scenario run.
#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error(transparent)]
    Core(#[from] discord_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("initial state file {path}: {message}")]
    InitialState { path: PathBuf, message: String },
}

pub type Result<T, E = AppError> = std::result::Result<T, E>;

impl AppError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io { path: path.into(), source }
    }

    /// 2 for rejected input, 3 for a numeric invariant violation, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Core(e) if e.is_validation() => 2,
            Self::Core(_) => 3,
            Self::Config(_) | Self::InitialState { .. } => 2,
            Self::Io { .. } => 1,
        }
    }
}
