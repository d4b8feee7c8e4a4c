use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("q = {0} is below the supported range (q >= 4)")]
    QTooSmall(u64),
    #[error("{0} is not an odd prime")]
    PNotOddPrime(u64),
    #[error("no auxiliary prime found for p = {p} below {bound}")]
    SearchExhausted { p: u64, bound: u64 },
    #[error("malformed descriptor: {0}")]
    MalformedDescriptor(String),
    #[error("modulus {value} is not compatible with Galois element of modulus {galois}")]
    IncompatibleModulus { value: u64, galois: u64 },
    #[error("unsupported q = {q} for {group}: {reason}")]
    UnsupportedQ {
        q: u64,
        group: &'static str,
        reason: &'static str,
    },
    #[error("unknown character label {0}")]
    UnknownLabel(String),
    #[error("{what} = {value} exceeds the enumeration bound {bound}")]
    BoundExceeded {
        what: &'static str,
        value: u64,
        bound: u64,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
