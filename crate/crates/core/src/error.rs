use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("generator index {k} out of range 1..={n}")]
    IndexOutOfRange { k: usize, n: usize },
    #[error("dimension {dim} exceeds the dense materialization cap {cap}")]
    DenseCapExceeded { dim: usize, cap: usize },
    #[error("dimension {dim} exceeds the resource guard {cap}")]
    ResourceGuard { dim: usize, cap: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("coefficient vector is empty")]
    EmptyCoefficients,
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("grid of size {n} is too coarse, need at least {required} (power of two)")]
    GridTooCoarse { n: usize, required: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
