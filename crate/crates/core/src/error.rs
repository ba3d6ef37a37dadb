use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("RM(1,{m}) exceeds the exhaustive enumeration bound m <= {max}")]
    ExhaustiveBound { m: u32, max: u32 },

    #[error("joint mask is empty, distance is undefined")]
    NoOverlap,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown digest algorithm id {0}")]
    UnknownDigest(u8),

    #[error("malformed input: {0}")]
    Format(String),

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
