use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FleckError {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{value} is divisible by {p}")]
    NonUnit { value: BigInt, p: u64 },

    #[error("denominator {denominator} is divisible by {p}")]
    NonUnitDenominator { denominator: BigInt, p: u64 },

    /// An exact division that a theorem guarantees did not go through.
    #[error("C_{modulus}({n},{r}) = {raw_sum} is not divisible by (-{p})^{exponent}")]
    IntegralityViolation {
        p: u64,
        modulus: u64,
        n: u64,
        r: i64,
        raw_sum: BigInt,
        exponent: i64,
    },

    #[error("n = {n} exceeds the configured limit {limit}")]
    ResourceLimit { n: u64, limit: u64 },

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, FleckError>;
