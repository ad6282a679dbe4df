use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected:?}, got {got:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("data length {got} does not match shape {rows}x{cols}")]
    InvalidData { rows: usize, cols: usize, got: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian (relative deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal mass {off_diagonal:.3e})")]
    NoConvergence { sweeps: usize, off_diagonal: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.6e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("trace is {trace:.15} instead of 1")]
    TraceNotUnit { trace: f64 },

    #[error("diagonal entry {index} is {value:.15} instead of 1")]
    DiagonalNotUnit { index: usize, value: f64 },

    #[error("amplitudes have squared norm {norm_sq:.15} instead of 1")]
    NotNormalized { norm_sq: f64 },

    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error(
        "Kraus operator {operator} has off-diagonal entry at ({row}, {col}); the channel is not population-preserving"
    )]
    NotPathDiagonal { operator: usize, row: usize, col: usize },

    #[error("Kraus set is incomplete: |sum K^dag K - I|_F = {residual:.3e}")]
    Incomplete { residual: f64 },

    #[error("invalid interferometer configuration: {0}")]
    InvalidConfig(String),

    #[error("adaptive Simpson could not reach tolerance {eps:.1e} on [{a}, {b}] within depth {max_depth}")]
    QuadratureBudget { a: f64, b: f64, eps: f64, max_depth: u32 },

    #[error("sampling failed: {0}")]
    Sampling(String),
}

pub type Result<T> = std::result::Result<T, Error>;
