use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported prime {0} (need an odd prime)")]
    UnsupportedPrime(u64),
    #[error("precision {precision} too large for p = {p} (max {max})")]
    PrecisionTooLarge { p: u64, precision: u32, max: u32 },
    #[error("element is not a unit")]
    NotAUnit,
    #[error("not divisible by {p}^{power}")]
    NotDivisible { p: u64, power: u32 },
    #[error("argument must lie in the maximal ideal")]
    NotInMaximalIdeal,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("defining polynomial is not irreducible modulo p")]
    Reducible,
    #[error("Eisenstein criterion fails: {0}")]
    NotEisenstein(String),
    #[error("operation requires an unramified extension")]
    NotUnramified,
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("series has nonzero constant term")]
    NonzeroConstantTerm,
    #[error("Lubin-Tate conditions fail: {0}")]
    NotLubinTate(String),
    #[error("series coefficients do not descend to the base ring (residual valuation {0})")]
    DescentFailure(u32),
    #[error("integrality failure at degree {degree}")]
    NotIntegral { degree: usize },
    #[error("sequence is not norm-coherent at level {0}")]
    NotNormCoherent(u32),
    #[error("unknown dataset `{0}`")]
    UnknownDataset(String),
}

pub type Result<T> = std::result::Result<T, Error>;
