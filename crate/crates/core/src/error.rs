use thiserror::Error;

use crate::rational::ParseRationalError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid game: {0}")]
    InvalidGame(String),

    #[error("{what} index {index} out of range (valid: 0..{len})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{what}: estimated work {estimate} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        estimate: u128,
        cap: u128,
    },

    #[error("row {label:?} is missing its {score} score")]
    MissingScore { label: String, score: &'static str },

    #[error(transparent)]
    Rational(#[from] ParseRationalError),

    #[error("malformed document: {0}")]
    Document(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn index(what: &'static str, index: usize, len: usize) -> Self {
        Error::IndexOutOfRange { what, index, len }
    }
}
