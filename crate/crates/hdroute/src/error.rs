use std::path::PathBuf;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("graph has no nodes")]
    EmptyGraph,

    #[error("invalid K={k}: must satisfy 1 <= K <= N/10 (N={n})")]
    InvalidK { k: usize, n: usize },

    #[error("invalid removal fraction {0}: must lie in (0, 1)")]
    InvalidFraction(f64),

    #[error("run too short: need {needed} steps, have {have}")]
    InsufficientRunLength { needed: usize, have: usize },

    #[error("no points above the congestion threshold")]
    NoCongestedPoints,

    #[error("nonpositive slope in R_c regression")]
    NonpositiveSlope,

    #[error("state dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code: 1 for config/input errors, 2 for runtime invariant violations.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvariantViolation(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
