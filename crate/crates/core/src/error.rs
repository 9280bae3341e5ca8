use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("transformation failed: {0}")]
    Transform(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("invalid spin value {0} (expected -1 or +1)")]
    InvalidSpin(i8),

    #[error("{what} has {size} qubits, exceeding the limit of {limit}")]
    SizeGuard {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("unsupported encoding: {0}")]
    UnsupportedEncoding(String),

    #[error("state is not normalized (|norm^2 - 1| = {0:e})")]
    NotNormalized(f64),

    #[error("optimizer failed: {0}")]
    Optimizer(String),

    #[error("serialization error: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
