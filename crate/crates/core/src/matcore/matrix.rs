use crate::prelude::*;
use alloc::vec;
use core::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense square complex matrix stored row-major.
///
/// Serializes as `{ "dim": n, "re": [[..]], "im": [[..]] }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    dim: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl TryFrom<MatrixRepr> for ComplexMatrix {
    type Error = Error;

    fn try_from(r: MatrixRepr) -> Result<Self> {
        let n = r.dim;
        if n == 0 {
            return Err(Error::InvalidArgument("dim must be positive"));
        }
        if r.re.len() != n || r.im.len() != n {
            return Err(Error::InvalidArgument("row count differs from dim"));
        }
        let mut data = Vec::with_capacity(n * n);
        for (row_re, row_im) in r.re.iter().zip(&r.im) {
            if row_re.len() != n || row_im.len() != n {
                return Err(Error::InvalidArgument("matrix is not square"));
            }
            data.extend(row_re.iter().zip(row_im).map(|(&a, &b)| Complex64::new(a, b)));
        }
        ComplexMatrix::from_vec(n, data)
    }
}

impl From<ComplexMatrix> for MatrixRepr {
    fn from(m: ComplexMatrix) -> Self {
        let n = m.dim;
        let re = (0..n).map(|i| (0..n).map(|j| m[(i, j)].re).collect()).collect();
        let im = (0..n).map(|i| (0..n).map(|j| m[(i, j)].im).collect()).collect();
        MatrixRepr { dim: n, re, im }
    }
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { dim, data }
    }

    /// Row-major data; fails on wrong length or non-finite entries.
    pub fn from_vec(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dim must be positive"));
        }
        if data.len() != dim * dim {
            return Err(Error::InvalidArgument("data length is not dim*dim"));
        }
        if !data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(ComplexMatrix { dim, data })
    }

    pub fn from_rows<const N: usize>(rows: [[Complex64; N]; N]) -> Self {
        Self::from_fn(N, |i, j| rows[i][j])
    }

    pub fn from_real_rows<const N: usize>(rows: [[f64; N]; N]) -> Self {
        Self::from_fn(N, |i, j| Complex64::new(rows[i][j], 0.0))
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, |i, j| if i == j { Complex64::new(values[i], 0.0) } else { ZERO })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[Complex64]) {
        for (i, &z) in v.iter().enumerate() {
            self[(i, j)] = z;
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    /// Plain transpose with respect to the standard basis.
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry modulus, `‖A‖_max`.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        ComplexMatrix { dim: self.dim, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        ComplexMatrix { dim: self.dim, data: self.data.iter().map(|&z| z * s).collect() }
    }

    /// `self + c·I`.
    pub fn shift(&self, c: f64) -> Self {
        let mut out = self.clone();
        for i in 0..self.dim {
            out[(i, i)] += c;
        }
        out
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs)?;
        Ok(self.matmul(rhs))
    }

    fn matmul(&self, rhs: &Self) -> Self {
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim;
        (0..n).map(|i| (0..n).map(|j| self.data[i * n + j] * x[j]).sum()).collect()
    }

    /// `‖self - self*‖_max`.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `‖self + self*‖_max`.
    pub fn skew_deviation(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] + self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `‖U*U - I‖_max`.
    pub fn unitary_deviation(&self) -> f64 {
        let g = self.adjoint().matmul(self);
        (&g - &ComplexMatrix::identity(self.dim)).max_abs()
    }

    /// `max |a_ij - b_ij|`.
    pub fn max_diff(&self, other: &Self) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Determinant by LU with partial pivoting.
    pub fn det(&self) -> Complex64 {
        let n = self.dim;
        let mut a = self.data.clone();
        let mut det = ONE;
        for col in 0..n {
            let pivot =
                (col..n).max_by(|&p, &q| a[p * n + col].norm().total_cmp(&a[q * n + col].norm())).unwrap_or(col);
            if a[pivot * n + col].is_zero() {
                return ZERO;
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for r in col + 1..n {
                let factor = a[r * n + col] / p;
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = a[col * n + j];
                    a[r * n + j] -= factor * v;
                }
            }
        }
        det
    }

    /// Embeds `self` as the leading block of a `dim`-square zero matrix.
    pub fn embed(&self, dim: usize) -> Result<Self> {
        if dim < self.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: dim });
        }
        Ok(Self::from_fn(dim, |i, j| if i < self.dim && j < self.dim { self[(i, j)] } else { ZERO }))
    }

    pub(crate) fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: other.dim });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

// The operator impls panic on a dimension mismatch; fallible callers use
// `try_mul` / `commutator`.
impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        self.matmul(rhs)
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        ComplexMatrix { dim: self.dim, data }
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        ComplexMatrix { dim: self.dim, data }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

/// Lie product `AB - BA`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.check_dim(b)?;
    Ok(&a.matmul(b) - &b.matmul(a))
}

/// `⟨x, y⟩ = Σ x_i conj(y_i)`, linear in the first slot.
pub fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

pub fn norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// The rank-one operator `x ⊗ y : z ↦ ⟨z, y⟩ x`, i.e. the matrix `x y*`.
pub fn outer(x: &[Complex64], y: &[Complex64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(x.len(), |i, j| x[i] * y[j].conj())
}

/// Returns `x / ‖x‖`, or `None` for a zero vector.
pub fn normalized(x: &[Complex64]) -> Option<Vec<Complex64>> {
    let r = norm(x);
    if r == 0.0 || !r.is_finite() {
        return None;
    }
    Some(x.iter().map(|z| z / r).collect())
}
