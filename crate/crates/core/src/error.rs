use thiserror::Error;

/// Errors raised by the arithmetic kernels and the algorithms built on them.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic {0} exceeds the supported bound 2^31")]
    CharacteristicTooLarge(u64),
    #[error("extension degree {0} is outside the supported range 1..=8")]
    UnsupportedDegree(usize),
    #[error("modulus is not monic of the expected degree")]
    ModulusNotMonic,
    #[error("modulus {0} is reducible over the prime field")]
    ReducibleModulus(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("series is zero to precision O(t^{0}) and cannot be inverted")]
    DivisionByZeroToPrecision(i64),
    #[error("element has negative valuation {0}")]
    NegativeValuation(i64),
    #[error("zero has no valuation")]
    ZeroHasNoValuation,
    #[error("polynomial degree {0} exceeds the dense arithmetic cap")]
    DegreeCapExceeded(usize),
    #[error("element must have strictly positive valuation (got {0})")]
    ValuationNotPositive(String),
    #[error("residue {0} is not a simple root of the residual polynomial")]
    NotASimpleResidualRoot(String),
    #[error("polynomial has a coefficient of negative valuation")]
    NonIntegralCoefficients,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("a split extension has no canonical valuation")]
    SplitExtensionHasNoCanonicalValuation,
    #[error("sequence needs at least 3 elements, got {0}")]
    TooShort(usize),
    #[error("b = {0} is of the form x^p - x in the base field; the sequence terminates")]
    SolvableB(String),
    #[error("valuation did not stabilize within the prefix for {0}")]
    NotStabilized(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency violation: {0}")]
    InternalConsistency(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
