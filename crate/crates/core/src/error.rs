use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix has no entries")]
    Empty,
    #[error("matrix contains a non-finite entry")]
    NonFinite,
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix is not Hermitian (relative defect {defect:e})")]
    NotHermitian { defect: f64 },
    #[error("Schur iteration did not converge within {sweeps} sweeps")]
    SchurNotConverged { sweeps: usize },
    #[error("eigenvalue {eigenvalue} lies on the branch cut (-inf, 0]")]
    EigenvalueOnCut { eigenvalue: Complex64 },
    #[error("eigenvalue gap {gap:e} too small for the Parlett recurrence")]
    ClusteredEigenvalues { gap: f64 },
    #[error("matrix is numerically singular (sigma_min / sigma_max = {ratio:e})")]
    Singular { ratio: f64 },
    #[error("matrix is not accretive (lambda_min of the real part = {margin:e})")]
    NotAccretive { margin: f64 },
    #[error("matrix is not positive definite (lambda_min = {margin:e})")]
    NotPositiveDefinite { margin: f64 },
    #[error("quadrature did not converge: {nodes} nodes, relative change {change:e}")]
    QuadratureNotConverged { nodes: usize, change: f64 },
    #[error("sector half-angles differ: {left} vs {right}")]
    SectorMismatch { left: f64, right: f64 },
    #[error("sector certificate rejected: {0}")]
    InvalidCertificate(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
