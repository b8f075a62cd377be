use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("inputs are not coprime")]
    NotCoprime,
    #[error("polynomial {0} is not monic")]
    NotMonic(String),
    #[error("polynomial {0} is reducible")]
    Reducible(String),
    #[error("{prime} divides {value}: residue symbol is ramified")]
    Ramified { value: String, prime: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("enumeration of {requested} candidates exceeds the budget of {cap}")]
    BudgetExceeded { requested: String, cap: u64 },
    #[error("integer {0} is outside the supported range (< 2^64)")]
    IntegerTooLarge(String),
    #[error("internal cross-check failed: {0}")]
    Mismatch(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
