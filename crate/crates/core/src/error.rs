use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("precision exhausted: result has no significant digits")]
    PrecisionExhausted,
    #[error("insufficient precision to decide: need absolute precision {needed}, have {have}")]
    InsufficientPrecision { needed: i64, have: i64 },
    #[error("element is not integral")]
    NotIntegral,
    #[error("element outside domain: {0}")]
    OutsideDomain(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("enumeration budget exceeded: predicted {predicted}, budget {budget}")]
    BudgetExceeded { predicted: u64, budget: u64 },
    #[error("inconsistent factorization: {0}")]
    InconsistentFactorization(String),
    #[error("element is not invertible: {0}")]
    NotInvertible(String),
}

pub type Result<T> = std::result::Result<T, Error>;
