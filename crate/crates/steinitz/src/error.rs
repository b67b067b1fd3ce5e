use thiserror::Error;

/// Errors reported by the rearrangement, signing, and oracle routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("index {index} out of range (max {max})")]
    OutOfRange { index: usize, max: usize },

    #[error("entry at row {row}, column {col} has a non-finite coordinate")]
    NonFinite { row: usize, col: usize },

    #[error("entry norm {norm} exceeds the unit bound (tolerance {tol})")]
    UnitNormViolation { norm: f64, tol: f64 },

    #[error("total sum has norm {norm}, above the zero tolerance {tol}")]
    ZeroSumViolation { norm: f64, tol: f64 },

    #[error("operation requires a symmetric norm")]
    NonSymmetricNorm,

    #[error("invalid norm specification: {0}")]
    InvalidNorm(String),

    #[error("search space of size {size} exceeds budget {budget}")]
    BudgetExceeded { size: u128, budget: u128 },

    #[error("no feasible point: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;
