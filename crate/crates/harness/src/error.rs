use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("parse error at byte {pos} in {text:?}: {msg}")]
    Parse {
        text: String,
        pos: usize,
        msg: String,
    },
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] fpsums_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("exact check failed: {0}")]
    CheckFailure(String),
    #[error("replay mismatch: {0}")]
    ReplayMismatch(String),
}

pub type Result<T> = std::result::Result<T, HarnessError>;

impl HarnessError {
    /// Process exit code contract: 0 success, 1 exact-check failure,
    /// 2 config or parse error, 3 resource limit.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::CheckFailure(_) | HarnessError::ReplayMismatch(_) => 1,
            HarnessError::Core(
                fpsums_core::Error::CapExceeded { .. } | fpsums_core::Error::TooLarge { .. },
            ) => 3,
            _ => 2,
        }
    }
}
