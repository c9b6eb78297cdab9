use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p = {p} exceeds the table budget of {budget}")]
    TooLarge { p: u64, budget: u64 },
    #[error("discrete logarithm of zero is undefined")]
    ZeroArgument,
    #[error("expected a vector of length {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("{d} does not divide p - 1 = {n}")]
    NotDivisor { d: u64, n: u64 },
    #[error("interval length {z} is out of range for p = {p}")]
    BadLength { z: u64, p: u64 },
    #[error("requested {n} distinct elements but p = {p}")]
    BadSize { n: u64, p: u64 },
    #[error("operands built over different fields (p = {0} and p = {1})")]
    ContextMismatch(u64, u64),
    #[error("{what}: instance size {size} exceeds the cap {cap}")]
    CapExceeded {
        what: &'static str,
        size: u64,
        cap: u64,
    },
    #[error("inconsistent pair-weight supports: {0}")]
    SupportMismatch(String),
    #[error("weight sup-norm {0} exceeds 1")]
    NormViolation(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
