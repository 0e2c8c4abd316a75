use smoothgame_core::Error as CoreError;

/// Errors surfaced by the command-line harness.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad names, malformed parameters or conflicting flags.
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError::Usage(message.into())
    }

    /// `2` for anything the caller got wrong before a game could start,
    /// `1` otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(
                CoreError::InvalidParameter { .. }
                | CoreError::InvalidExponent(_)
                | CoreError::IncompatibleScenario { .. }
                | CoreError::DimensionMismatch { .. },
            ) => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
