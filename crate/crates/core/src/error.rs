use thiserror::Error;

use crate::gf::FieldError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("{what} needs {needed} steps, over the enumeration budget of {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u128,
    },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("table is not total: expected {expected} outputs, got {got}")]
    IncompleteTable { expected: usize, got: usize },
    #[error("quadratic coefficient at coordinate {0} is zero")]
    ZeroQuadratic(usize),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
