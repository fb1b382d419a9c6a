use thiserror::Error;

/// Errors raised by the measurement library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("entry count {found} does not match shape {rows}x{cols}")]
    ShapeMismatch { rows: usize, cols: usize, found: usize },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("not Hermitian: max |M - M^dagger| entry {defect:e} exceeds {tol:e}")]
    NotHermitian { defect: f64, tol: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("not an effect: spectrum [{min_eig}, {max_eig}] leaves [0, 1]")]
    InvalidEffect { min_eig: f64, max_eig: f64 },

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("invalid joint POVM: {0}")]
    InvalidJoint(String),

    #[error("invalid Markov kernel: {0}")]
    InvalidKernel(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("function undefined at eigenvalue {eigenvalue}")]
    Domain { eigenvalue: f64 },

    #[error("outcome labels: {0}")]
    Labeling(String),

    #[error("operators do not commute: max commutator entry {defect:e} exceeds {tol:e}")]
    NotCommuting { defect: f64, tol: f64 },

    #[error("dilations do not share an embedding: {0}")]
    UnsharedDilation(String),

    #[error("identity violated ({what}): defect {defect:e}")]
    IdentityViolation { what: String, defect: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
