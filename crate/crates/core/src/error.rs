use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("value {value} at {location} is outside [0,1]")]
    OutOfRange { location: String, value: f64 },

    #[error("invalid t-norm: {0}")]
    InvalidTNorm(String),

    #[error("exact arithmetic is unavailable for t-norms with a product piece")]
    ExactUnsupported,

    #[error("table is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },

    #[error("invalid [0,1]-order: {0}")]
    InvalidOrder(String),

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("unknown element `{0}`")]
    UnknownElement(String),

    #[error("carrier mismatch: expected {expected} points, found {found}")]
    CarrierMismatch { expected: usize, found: usize },

    #[error("structures use different t-norms")]
    TNormMismatch,

    #[error("carrier of {size} points exceeds the enumeration bound of {limit}")]
    TooLarge { size: usize, limit: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
