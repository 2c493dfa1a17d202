use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("resource budget exceeded: {what} needs {needed}, limit is {limit}")]
    BudgetExceeded { what: String, needed: u64, limit: u64 },

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("character does not kill relator {relator}")]
    NotACharacter { relator: usize },

    #[error("Casimir eigenvalue {eigenvalue} is shared by non-isomorphic constituents; a finer invariant is needed")]
    EigenvalueCollision { eigenvalue: String },

    #[error("constituent multiplicity {found} exceeds 1")]
    MultiplicityTooHigh { found: usize },

    #[error("module is not unipotent")]
    NotUnipotent,

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
