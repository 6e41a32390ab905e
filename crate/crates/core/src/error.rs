use thiserror::Error;

/// Errors raised by the arithmetic, summation and series routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{a} is not invertible modulo {modulus}")]
    NotInvertible { a: i64, modulus: u64 },
    #[error("unsupported modulus {0}: closed form requires an odd modulus")]
    UnsupportedModulus(u64),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("unsupported Bessel order: weight {0} must be even and at least 4")]
    UnsupportedOrder(i64),
    #[error("cutoff exceeded: requested n = {requested}, table holds n <= {max}")]
    CutoffExceeded { requested: i64, max: i64 },
    #[error("sigma = {0} lies outside the regime [0, 7/25]")]
    OutOfRegime(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("malformed data: {0}")]
    Data(String),
}

pub type Result<T> = std::result::Result<T, Error>;
