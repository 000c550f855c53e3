use thiserror::Error;

/// Errors raised by state construction, measures and channel operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("matrix has zero trace")]
    TraceZero,

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    ConvergenceFailure { sweeps: usize, off_norm: f64 },

    #[error("invalid rank {rank} for dimension {dim}")]
    InvalidRank { rank: usize, dim: usize },

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("probability vector is not normalized (sum {0})")]
    NotNormalized(f64),

    #[error("invalid truncation index k={k} for dimension {dim}")]
    InvalidK { k: usize, dim: usize },

    #[error("log of a rank-deficient matrix: eigenvalue {eigenvalue:e} carries weight {weight:e} of the dephased state")]
    SingularSupport { eigenvalue: f64, weight: f64 },

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("dimension {0} too small for this operation")]
    DimensionTooSmall(usize),

    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),

    #[error("curve family {family} is not defined for d={dim}")]
    FamilyInvalidForDim { family: String, dim: usize },

    #[error("parameter {value} outside [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },

    #[error("at least two measurement bases are required, got {0}")]
    TooFewBases(usize),

    #[error("basis is not orthonormal (Gram deviation {0:e})")]
    NotOrthonormal(f64),

    #[error("invalid Kraus set: {0}")]
    InvalidKraus(String),

    #[error("malformed matrix file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
