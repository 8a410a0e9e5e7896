//! Default tolerance ladder. Each rung is relative to the norm named at its
//! use site; rungs sit a decade or more apart.

/// Hermitian / skew-Hermitian / unitary acceptance at construction.
pub const CONSTRUCTION: f64 = 1e-12;
/// Jacobi stopping rule, relative to `‖A‖_F`.
pub const JACOBI_OFFDIAG: f64 = 1e-13;
/// Eigen-residual and skew-Hermitian input checks.
pub const EIGEN_RESIDUAL: f64 = 1e-10;
/// Numeric rank threshold on singular values.
pub const RANK: f64 = 1e-9;
