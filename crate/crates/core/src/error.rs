use thiserror::Error;

use crate::counting::Method;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{n} variables exceed the supported maximum of {max}")]
    WidthOverflow { n: usize, max: usize },

    #[error("width mismatch: {left} vs {right} variables")]
    WidthMismatch { left: usize, right: usize },

    #[error("bit vector for n={n} is not monotone")]
    NotMonotone { n: usize },

    #[error("bits set beyond the 2^{n} positions of the vector")]
    StrayBits { n: usize },

    #[error("refused: {what} needs about {needed_mb} MB, budget is {budget_mb} MB")]
    Budget {
        what: String,
        needed_mb: u64,
        budget_mb: u64,
    },

    #[error("method {method} cannot compute lambda_{n_target}: {reason}")]
    Unsupported {
        method: Method,
        n_target: usize,
        reason: String,
    },

    #[error("verification failed: lambda_{n_target} by {method} gave {got}, expected {expected}")]
    Verification {
        n_target: usize,
        method: Method,
        expected: u128,
        got: u128,
    },

    #[error("exact accumulator overflowed 128 bits")]
    Overflow,

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
