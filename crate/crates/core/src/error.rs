use thiserror::Error;

use crate::jexpr::ExprError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A query past what a table holds. `max` is the largest admissible value
    /// (the sieve limit, pi(limit), or n_max depending on `what`).
    #[error("{what} = {value} is out of range (max {max})")]
    OutOfRange {
        what: &'static str,
        value: u64,
        max: u64,
    },

    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error("corrupt table cache: {0}")]
    CorruptCache(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("parameter violation: {0}")]
    ParameterViolation(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error(transparent)]
    Expr(#[from] ExprError),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
