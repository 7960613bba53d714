use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("map does not preserve filtration")]
    FiltrationNotPreserved,
    #[error("not nilpotent")]
    NotNilpotent,
    #[error("Nilpotence Hypothesis violated: {0}")]
    NilpotenceViolated(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("containment violated: {0}")]
    ContainmentViolation(String),
    #[error("operator is not linear over the base ring: {0}")]
    NotLinear(String),
    #[error("operators do not commute: {0}")]
    NotCommuting(String),
    #[error("sequence is not exact in degree {degree}: {reason}")]
    NotExact { degree: i32, reason: String },
    #[error("square does not commute: {0}")]
    NonCommutingSquare(String),
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("inconsistent fixture: {0}")]
    InconsistentFixture(String),
    #[error("invalid curve data: {0}")]
    InvalidCurve(String),
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("size {size} out of bounds (allowed {min}..={max})")]
    SizeOutOfBounds { size: usize, min: usize, max: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error at {path}: {message}")]
    Validation { path: String, message: String },
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
