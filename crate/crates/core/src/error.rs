use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    Field(String),
    #[error("invalid ring: {0}")]
    Ring(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("degree error: {0}")]
    Degree(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("not a matrix factorization: {0}")]
    Factorization(String),
    #[error("not a cocycle: {0}")]
    Cocycle(String),
    #[error("invalid section data: {0}")]
    Section(String),
    #[error("invalid exponent matrix: {0}")]
    Exponent(String),
    #[error("computation too large: {unknowns} unknowns exceeds cap {cap}")]
    TooLarge { unknowns: usize, cap: usize },
    #[error("{0}")]
    Invalid(String),
    #[error("{line}:{column}: {inner}")]
    At {
        line: usize,
        column: usize,
        inner: Box<Error>,
    },
    #[error("query {index}: {inner}")]
    Query { index: usize, inner: Box<Error> },
}

impl Error {
    /// Parse and name-resolution errors, as opposed to invalid mathematics.
    pub fn is_syntax(&self) -> bool {
        match self {
            Error::Parse { .. } => true,
            Error::At { inner, .. } | Error::Query { inner, .. } => inner.is_syntax(),
            _ => false,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
