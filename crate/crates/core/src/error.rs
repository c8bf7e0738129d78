use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("exact division failed: {0}")]
    NonDivisible(String),
    #[error("fractional power q^(1/{h}) cannot be evaluated at order {r}")]
    NonCoprimeDenominator { h: u64, r: u64 },
    #[error("order {0} must be odd and positive")]
    BadOrder(u64),
    #[error("gcd condition violated: {0}")]
    NonCoprime(String),
    #[error("a denominator vanishes: {0}")]
    PoleHit(String),
    #[error("no limit rule for {0}")]
    UnresolvedLimit(String),
    #[error("truncation K={got} too small, need at least {need}")]
    TruncationTooSmall { need: usize, got: usize },
    #[error("not a rational homology sphere: {0}")]
    NotQhs(String),
    #[error("undefined at order {r}: {why}")]
    UndefinedAtOrder { r: u64, why: String },
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
