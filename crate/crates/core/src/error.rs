//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("not a valid rational number: {0}")]
    BadRational(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("not a permutation of 1..={0}")]
    NotAPermutation(usize),

    #[error("grid map is not injective")]
    NonInjectiveGrid,

    #[error("grid enumeration for n = {0} requires an explicit limit")]
    GridLimitRequired(usize),

    #[error("variable {0} does not belong to the system")]
    ForeignVariable(String),

    #[error("instance size {n} exceeds the configured cap {cap}")]
    SizeCap { n: usize, cap: usize },

    #[error("pivot limit {0} exceeded; no verdict")]
    PivotLimit(u64),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
