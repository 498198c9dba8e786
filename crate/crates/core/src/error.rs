use thiserror::Error;

/// Errors raised anywhere in the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid ring configuration: {0}")]
    InvalidConfig(String),

    #[error("scalars belong to different rings")]
    ConfigMismatch,

    #[error("prime {p} divides M*N = {mn}")]
    PrimeDividesLevel { p: u64, mn: u64 },

    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("cannot parse scalar {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("p-adic operands use different primes ({0} and {1})")]
    PrimeMismatch(u64, u64),

    #[error("p-adic precision exhausted")]
    PrecisionExhausted,

    #[error("division by zero")]
    DivisionByZero,

    #[error("{value} is not congruent to 1 mod {p}")]
    NotOneModP { value: String, p: u64 },

    #[error("negative valuation {0} where an integral input is required")]
    NegativeValuation(i64),

    #[error("series shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("truncation orders differ ({0} vs {1})")]
    OrderMismatch(u32, u32),

    #[error("arity {0} exceeds the supported maximum of 64 variables")]
    ArityTooLarge(usize),

    #[error("monomial degree {degree} exceeds truncation order {order}")]
    DegreeOutOfRange { degree: u32, order: u32 },

    #[error("substitution image for variable {0} has a nonzero constant term")]
    NonzeroConstantImage(usize),

    #[error("binomial series argument has a nonzero constant term")]
    NonzeroConstantTerm,

    #[error("constant term matrix is singular")]
    Singular,

    #[error("coefficient of {monomial} is not divisible by {prime}")]
    DivisibilityViolation { prime: u64, monomial: String },

    #[error("invalid form matrix: {0}")]
    InvalidForm(String),

    #[error("{kind} form needs {expected} dimension, got n = {n}")]
    ParityMismatch { kind: String, expected: String, n: usize },

    #[error("lift does not fix the identity: {0}")]
    NotFixingIdentity(String),

    #[error("consistency check failed: {0}")]
    Inconsistent(String),

    #[error("invalid report: {0}")]
    Report(String),

    #[error("usage: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
