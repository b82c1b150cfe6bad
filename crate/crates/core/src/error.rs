use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("{routine} did not converge after {sweeps} sweeps")]
    NoConvergence { routine: &'static str, sweeps: usize },

    #[error("invalid tolerances: {0}")]
    InvalidTolerance(String),

    #[error("group inverse does not exist: Drazin index {0} > 1")]
    IndexTooLarge(usize),

    #[error("axiom {axiom} residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    ResidualCheck {
        axiom: String,
        residual: f64,
        tolerance: f64,
    },

    #[error("the two dagger-Drazin formulas disagree by {0:.3e}")]
    FormulaDisagreement(f64),

    #[error("Choi matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotCp(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
