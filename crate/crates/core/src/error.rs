use thiserror::Error;

/// Errors raised while building, compiling, or verifying programs.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("polynomial degree {degree} exceeds the representable degree {max}")]
    DegreeOverflow { degree: usize, max: usize },

    #[error("odd degree {0}: polynomial cannot be a sum of squares")]
    OddDegree(usize),

    #[error("degree bookkeeping failed: {0}")]
    DegreeBookkeeping(String),

    #[error("malformed program: {0}")]
    MalformedProgram(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unsupported cone for this operation: {0}")]
    UnsupportedCone(String),

    #[error("polynomial is unbounded below: {0}")]
    UnboundedBelow(String),

    #[error("denominator is not positive at a sample point ({0})")]
    NonPositiveDenominator(f64),

    #[error("empty program")]
    EmptyProgram,
}

pub type Result<T> = std::result::Result<T, Error>;
