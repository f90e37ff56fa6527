use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("the root vertex has no parent")]
    RootHasNoParent,

    #[error("invalid vertex ({level}, {index}): index must be below p^level")]
    InvalidVertex { level: u32, index: u64 },

    #[error("invalid Prüfer point (r={r}, m={m}, l={l})")]
    InvalidPrufer { r: u64, m: u32, l: u32 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("term budget of {budget} exhausted before reaching the requested accuracy")]
    BudgetExhausted { budget: usize },

    #[error("sign undecided after {terms} terms (argument is suspiciously close to a root)")]
    SignUndecided { terms: usize },

    #[error("no bracket found for eigenvalue {index} below the scan ceiling")]
    ScanExhausted { index: usize },

    #[error("dimension {dim} exceeds the configured limit {limit}")]
    DimensionLimit { dim: u64, limit: u64 },

    #[error("matrix is not symmetric tridiagonal")]
    NotTridiagonal,

    #[error("s = {0} lies on or too close to a pole")]
    Pole(String),

    #[error("eigenvalue budget of {budget} too small for the requested accuracy")]
    EigenvalueBudget { budget: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
