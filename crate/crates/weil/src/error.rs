use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeilError {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("singular curve")]
    Singular,
    #[error("points are not killed by {0}")]
    NotTorsion(u64),
    #[error("{0} divides the characteristic")]
    BadOrder(u64),
    #[error("pairing evaluation stayed degenerate after {0} retries")]
    Degenerate(u32),
    #[error("no field with rational {n}-torsion up to size {bound} (smallest candidate degree {degree})")]
    TorsionNotRational { n: u64, bound: u64, degree: usize },
    #[error("square root of -1 is not in the field")]
    NoCm,
    #[error("fixture: {0}")]
    Fixture(String),
}

pub type Result<T> = std::result::Result<T, WeilError>;
