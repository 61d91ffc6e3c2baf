use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("non-integer distance {0:?}; distances must be exact integers")]
    NonInteger(String),

    #[error("unsupported size n={n}: {reason}")]
    UnsupportedSize { n: usize, reason: &'static str },

    #[error("invalid instance: {0}")]
    Validation(String),

    #[error("brute-force matching is limited to k <= {max} vertices (got {k})")]
    SizeGuard { k: usize, max: usize },

    #[error("schedule decode error: {0}")]
    Decode(String),

    #[error("invalid layout: {0}")]
    Layout(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}
