use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {context} (got {got}, expected {expected})")]
    DimensionMismatch {
        context: &'static str,
        got: usize,
        expected: usize,
    },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite entry encountered in {context}")]
    NonFinite { context: &'static str },

    #[error("operator is not Hermitian: deviation {deviation:.3e} exceeds tolerance {tol:.3e}")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("eigendecomposition failed: {0}")]
    EigFailed(String),

    #[error("eigendecomposition residual {residual:.3e} exceeds {tol:.3e}")]
    EigResidual { residual: f64, tol: f64 },

    #[error("linear system is singular or too ill-conditioned (residual {residual:.3e})")]
    SingularSystem { residual: f64 },

    #[error("generator is not relaxing: nonzero eigenvalue with real part {max_re:.3e}")]
    NotRelaxing { max_re: f64 },

    #[error("zero eigenvalue cluster is defective: projector residual {residual:.3e}")]
    DegenerateZeroCluster { residual: f64 },

    #[error("steady state is not unique: kernel dimension {kernel_dim}")]
    NonUniqueSteadyState { kernel_dim: usize },

    #[error("steady-state candidate is not a valid state: {0}")]
    InvalidSteadyState(String),

    #[error(
        "first-order projected coupling does not vanish: |P0 K P0| = {norm:.3e} \
         (tolerance {tol:.3e}); pass an explicit extra-Hamiltonian term instead"
    )]
    NonvanishingFirstOrder { norm: f64, tol: f64 },

    #[error("superoperator is not a valid generator: reconstruction residual {residual:.3e}")]
    NotAGenerator { residual: f64 },

    #[error("invalid tolerance configuration: {0}")]
    InvalidTolerance(String),
}

pub type Result<T> = std::result::Result<T, Error>;
