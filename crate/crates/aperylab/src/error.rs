//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The generators have a common divisor > 1, so the complement is infinite.
    #[error("not a numerical semigroup (infinite complement): generators have gcd {gcd}")]
    InfiniteComplement { gcd: u64 },

    #[error("{n} is not an element of the semigroup")]
    NotAnElement { n: u64 },

    #[error("not a valid Apéry set: {reason}")]
    InvalidAperySet { reason: String },

    #[error("invalid parameters for family `{family}`: {reason}")]
    InvalidParameters { family: &'static str, reason: String },

    /// The exhaustive factorization enumerator hit its size guard.
    #[error("more than {cap} factorizations; the enumeration cap aborted the call")]
    TooManyFactorizations { cap: usize },

    #[error("arithmetic overflow while {context}")]
    Overflow { context: &'static str },

    #[error("genus {requested} exceeds the enumeration capacity (max {max})")]
    GenusCapacity { requested: u32, max: u32 },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
