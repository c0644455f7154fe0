use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("unsupported variant: {0}")]
    UnsupportedVariant(String),
    #[error("budget exceeded: {what} needs {needed}, budget is {budget}")]
    BudgetExceeded {
        what: String,
        needed: u128,
        budget: u128,
    },
    #[error("not a chain: {0}")]
    NotAChain(String),
    #[error("unknown lemma `{0}`")]
    UnknownLemma(String),
    #[error("invalid type ({a},{b},{c}) for n={n}")]
    InvalidType { a: i64, b: i64, c: i64, n: u32 },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
