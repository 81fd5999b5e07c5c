use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix is not square: expected {expected} columns, row {row} has {found}")]
    NotSquare {
        expected: usize,
        row: usize,
        found: usize,
    },
    #[error("matrix is empty")]
    Empty,
    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFiniteEntry { row: usize, col: usize },
    #[error("matrix is not symmetric (relative asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },
    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("eigensolver did not converge within {sweeps} sweeps")]
    ConvergenceFailure { sweeps: usize },
    #[error("scalar function is not finite at {argument:e}")]
    DomainViolation { argument: f64 },
    #[error("Cholesky factorization failed at pivot {index} (value {pivot:e})")]
    FactorizationFailure { index: usize, pivot: f64 },
    #[error("parameter `{name}` = {value} is out of range")]
    ParamOutOfRange { name: &'static str, value: f64 },
    #[error("quadrature budget of {panels} panels exhausted (error estimate {error_estimate:e})")]
    QuadratureBudgetExceeded { panels: usize, error_estimate: f64 },
    #[error("integrand is not finite at {at:e}")]
    NonFiniteIntegrand { at: f64 },
    #[error("measure is not integrable against λ/(1+λ): {reason}")]
    NonIntegrableMeasure { reason: String },
    #[error("function `{label}` is not known to be nonnegative on (0,∞)")]
    NotNonnegative { label: String },
    #[error("invalid quadrature plan: {0}")]
    InvalidPlan(&'static str),
    #[error("{0}")]
    Unsupported(String),
}
