use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("matrix is not hermitian: ‖m − m*‖_op = {defect:.3e} exceeds {bound:.3e}")]
    NotHermitian { defect: f64, bound: f64 },

    #[error("matrix is not unitary: ‖uu* − I‖_op = {defect:.3e}")]
    NotUnitary { defect: f64 },

    #[error("not a density operator: {0}")]
    NotDensity(String),

    #[error("operator is not positive semidefinite: min eigenvalue {0:.3e}")]
    NotPositive(f64),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
