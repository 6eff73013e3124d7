use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("sl_N needs N >= 2, got {0}")]
    RankTooSmall(usize),
    #[error("epsilon is undefined for equal roots ({0})")]
    EqualRoots(String),
    #[error("variable {0} is not in the context")]
    ContextMismatch(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at the assignment: factor {0} vanishes")]
    Pole(String),
    #[error("variable {0} is unassigned")]
    Unassigned(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid site index {site} (n = {n})")]
    InvalidSite { site: usize, n: usize },
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("coincident B_2 diagonal entries {0} and {1}")]
    CoincidentDiagonal(usize, usize),
    #[error("truncation order too small: {0}")]
    Truncation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
