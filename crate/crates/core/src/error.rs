use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("unsupported dimension {dim}: {reason}")]
    UnsupportedDimension { dim: usize, reason: &'static str },
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("matrix is not skew-Hermitian (deviation {deviation:e})")]
    NotSkewHermitian { deviation: f64 },
    #[error("matrix is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },
    #[error("vector is not a unit vector (norm {norm})")]
    NotUnitVector { norm: f64 },
    #[error("Jacobi iteration did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
    #[error("no Krylov-independent vector found (smallest singular value {smallest:e})")]
    IllConditioned { smallest: f64 },
    #[error("asymmetry witness search exhausted: every candidate gave a symmetric interval")]
    WitnessExhausted,
    #[error("rank-one radius mismatch {gap:e} for an affinely related pair")]
    Lemma22Inconsistent { gap: f64 },
}
