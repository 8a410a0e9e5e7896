//! Cyclic complex Jacobi eigensolver for Hermitian matrices.
//!
//! Each rotation acts on one `(p, q)` plane: the off-diagonal phase is first
//! removed with `diag(1, e^{-iφ})`, which leaves a real symmetric 2x2 block,
//! and a classical Jacobi rotation then annihilates it. The product of the
//! plane transforms is accumulated into the eigenvector matrix.

use super::hermitian::HermitianMatrix;
use super::matrix::ComplexMatrix;
use super::tol;
use crate::prelude::*;
use crate::{Error, Result};

/// Sweeps allowed before the iteration is declared divergent.
pub const MAX_SWEEPS: usize = 60;

/// `A = V diag(λ) V*`, eigenvalues ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Columns are orthonormal eigenvectors, in eigenvalue order.
    pub vectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.vectors.column(k)
    }

    /// `‖A V - V diag(λ)‖_max`.
    pub fn residual(&self, a: &ComplexMatrix) -> f64 {
        let av = a * &self.vectors;
        let n = a.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let d = av[(i, j)] - self.vectors[(i, j)] * self.eigenvalues[j];
                worst = worst.max(d.norm());
            }
        }
        worst
    }

    /// `‖V* V - I‖_max`.
    pub fn orthonormality_defect(&self) -> f64 {
        self.vectors.unitary_deviation()
    }
}

/// Eigen-decomposition of a Hermitian matrix by cyclic Jacobi sweeps.
///
/// Converged once the largest off-diagonal modulus is at most
/// `1e-13 · ‖A‖_F`.
pub fn hermitian_eigen(a: &HermitianMatrix) -> Result<EigenDecomposition> {
    let n = a.dim();
    let mut work = a.as_matrix().clone();
    let mut vectors = ComplexMatrix::identity(n);
    let threshold = tol::JACOBI_OFFDIAG * a.frobenius();

    let mut converged = false;
    for _ in 0..=MAX_SWEEPS {
        if max_off_diagonal(&work) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut work, &mut vectors, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| work[(i, i)].re.total_cmp(&work[(j, j)].re).then(i.cmp(&j)));
    let eigenvalues = order.iter().map(|&i| work[(i, i)].re).collect();
    let sorted = ComplexMatrix::from_fn(n, |r, c| vectors[(r, order[c])]);
    Ok(EigenDecomposition { eigenvalues, vectors: sorted })
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(a: &HermitianMatrix) -> Result<Vec<f64>> {
    hermitian_eigen(a).map(|e| e.eigenvalues)
}

fn max_off_diagonal(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut worst: f64 = 0.0;
    for p in 0..n {
        for q in p + 1..n {
            worst = worst.max(a[(p, q)].norm());
        }
    }
    worst
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r;
    let alpha = a[(p, p)].re;
    let beta = a[(q, q)].re;
    let theta = (beta - alpha) / (2.0 * r);
    let t = if theta == 0.0 { 1.0 } else { theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt()) };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let conj_phase = phase.conj();

    // plane transform G: G_pp = c, G_pq = s, G_qp = -s e^{-iφ}, G_qq = c e^{-iφ}
    let g_qp = -conj_phase * s;
    let g_qq = conj_phase * c;
    let n = a.dim();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c + akq * g_qp;
        a[(k, q)] = akp * s + akq * g_qq;
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c + vkq * g_qp;
        v[(k, q)] = vkp * s + vkq * g_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c + aqk * g_qp.conj();
        a[(q, k)] = apk * s + aqk * g_qq.conj();
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
}
