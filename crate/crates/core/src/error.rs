use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cyclic order must be at least 1, got {0}")]
    NonPositiveModulus(String),

    #[error("could not factor {0} within the configured effort budget")]
    FactorizationFailure(String),

    #[error("element has {got} coordinates but the group has {expected} cyclic factors")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("valuation {f} exceeds exponent {e}")]
    InvalidValuation { f: u32, e: u32 },

    #[error("enumeration needs {needed} steps, cap is {cap}")]
    CapacityExceeded { needed: String, cap: u64 },

    #[error("parse error: {0}")]
    Parse(String),
}
