use thiserror::Error;

/// Errors raised by the geometric primitives, constructions and certifiers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("dimension {0} not supported (need n >= 2)")]
    BadDimension(usize),

    #[error("angle {0} outside [0, pi]")]
    AngleOutOfRange(f64),

    #[error("invalid vector: {0}")]
    InvalidVector(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("enclosing ball center is at the origin; no unique enclosing cap")]
    DegenerateCenter,

    #[error("plane undefined: direction is parallel to the apex")]
    PlaneUndefined,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("desk-scale limit exceeded: {0}")]
    LimitExceeded(String),

    #[error("empty input")]
    Empty,

    #[error("i/o error: {0}")]
    Io(String),

    #[error("format error: {0}")]
    Format(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
