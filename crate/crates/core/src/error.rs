use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("duplicate point {0}")]
    DuplicatePoint(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("line is not standard (direction has zero first coordinate)")]
    NonStandardLine,
    #[error("singular point: gradient vanishes")]
    SingularPoint,
    #[error("no unique line through the point: z = ±i")]
    NoUniqueLine,
    #[error("cap exceeded: {what} is {size}, cap {cap}")]
    CapExceeded { what: &'static str, size: usize, cap: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
