//! Error types shared by all modules.

use thiserror::Error;

/// Errors produced by the numeric operations in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument fell outside an operation's mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A root search could not establish a sign change on the given interval.
    #[error("failed to bracket a root in [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },

    /// A computation would exceed a configured size budget.
    #[error("resource budget exceeded: {0}")]
    Resource(String),

    /// An empirical hypothesis required by a scan was violated.
    #[error("hypothesis violated at n = {witness}: D_n = {value} is not below {bound}")]
    Hypothesis { witness: u32, value: f64, bound: f64 },

    /// A form file could not be parsed.
    #[error("malformed form data: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
