use core::ops::Deref;

use serde::{Deserialize, Serialize};

use super::matrix::ComplexMatrix;
use super::tol;
use crate::{Error, Result};

/// A validated self-adjoint matrix.
///
/// The stored form is exactly symmetrized, `(A + A*) / 2`, so that the
/// diagonal is real and `a_ji == conj(a_ij)` bit for bit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct HermitianMatrix {
    inner: ComplexMatrix,
}

impl HermitianMatrix {
    /// Accepts `a` if `‖A - A*‖_max ≤ 1e-12 · max(1, ‖A‖_max)`.
    pub fn new(a: ComplexMatrix) -> Result<Self> {
        if !a.is_finite() {
            return Err(Error::NonFinite);
        }
        let deviation = a.hermitian_deviation();
        if deviation > tol::CONSTRUCTION * a.max_abs().max(1.0) {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self::symmetrize(a))
    }

    /// Symmetrizes without checking. Intended for matrices that are Hermitian
    /// in exact arithmetic but carry accumulated rounding.
    pub fn symmetrize(a: ComplexMatrix) -> Self {
        let n = a.dim();
        let inner = ComplexMatrix::from_fn(n, |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5);
        HermitianMatrix { inner }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        HermitianMatrix { inner: ComplexMatrix::diagonal(values) }
    }

    pub fn identity(dim: usize) -> Self {
        HermitianMatrix { inner: ComplexMatrix::identity(dim) }
    }

    pub fn zeros(dim: usize) -> Self {
        HermitianMatrix { inner: ComplexMatrix::zeros(dim) }
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.inner
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.inner
    }

    /// Real trace.
    pub fn trace_re(&self) -> f64 {
        self.inner.trace().re
    }

    pub fn scale(&self, s: f64) -> Self {
        HermitianMatrix { inner: self.inner.scale_real(s) }
    }

    pub fn shift(&self, c: f64) -> Self {
        HermitianMatrix { inner: self.inner.shift(c) }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.inner.check_dim(&other.inner)?;
        Ok(HermitianMatrix { inner: &self.inner + &other.inner })
    }

    /// `U A U*`, re-symmetrized.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<Self> {
        let ua = u.try_mul(&self.inner)?;
        Ok(Self::symmetrize(ua.try_mul(&u.adjoint())?))
    }

    pub fn transpose(&self) -> Self {
        HermitianMatrix { inner: self.inner.transpose() }
    }
}

impl Deref for HermitianMatrix {
    type Target = ComplexMatrix;

    fn deref(&self) -> &ComplexMatrix {
        &self.inner
    }
}

impl TryFrom<ComplexMatrix> for HermitianMatrix {
    type Error = Error;

    fn try_from(a: ComplexMatrix) -> Result<Self> {
        HermitianMatrix::new(a)
    }
}

impl From<HermitianMatrix> for ComplexMatrix {
    fn from(h: HermitianMatrix) -> Self {
        h.inner
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn construction_symmetrizes_small_noise() {
        let mut m = ComplexMatrix::from_real_rows([[1.0, 2.0], [2.0, 3.0]]);
        m[(0, 1)] += Complex64::new(1e-13, 0.0);
        m[(1, 1)] += Complex64::new(0.0, 1e-13);
        let h = HermitianMatrix::new(m).unwrap();
        assert_eq!(h[(0, 1)], h[(1, 0)].conj());
        assert_eq!(h[(1, 1)].im, 0.0);
    }

    #[test]
    fn construction_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows([[1.0, 2.0], [0.0, 3.0]]);
        assert!(matches!(HermitianMatrix::new(m), Err(Error::NotHermitian { .. })));
    }
}
