use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not symmetric (residual {residual:e})")]
    NotSymmetric { residual: f64 },

    #[error("matrix is not hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not orthogonal (defect {defect:e})")]
    NotOrthogonal { defect: f64 },

    #[error("matrix is singular: |det| = {det:e} is below threshold {threshold:e}")]
    SingularMatrix { det: f64, threshold: f64 },

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
    },

    #[error("invalid structure constants: {0}")]
    InvalidStructureConstants(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("operation not supported for group {group}: {reason}")]
    Unsupported { group: String, reason: String },

    #[error("irrep enumeration exceeded the Casimir cap {cap} ({detail})")]
    CapExceeded { cap: f64, detail: String },

    #[error("graph is disconnected: {unreachable} nodes unreachable from the identity")]
    Disconnected { unreachable: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
