use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is too large (must be below 2^32)")]
    ModulusTooLarge(u64),
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("exponent vector has length {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operands live over different fields (p = {0} and p = {1})")]
    FieldMismatch(u64, u64),
    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,
    #[error("trivial quotient: modulus is zero or a monomial")]
    TrivialQuotient,
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("redrawing, not homothety")]
    NotHomothetic,
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
