//! Dense complex matrices sized for `n ≤ 16`.

use crate::prelude::*;
mod eigen;
mod hermitian;
mod matrix;
pub mod sample;
pub mod tol;

pub use eigen::{hermitian_eigen, hermitian_eigenvalues, EigenDecomposition, MAX_SWEEPS};
pub use hermitian::HermitianMatrix;
pub use matrix::{commutator, inner, norm, normalized, outer, ComplexMatrix};
pub use sample::{
    complex_gaussian, gaussian_matrix, random_hermitian, random_rank_k_hermitian, random_unit_vector, random_unitary,
    Stream,
};

use crate::{Error, Result};

/// Largest dimension the samplers and the documented tolerances target.
pub const MAX_DIM: usize = 16;

/// Spectrum `{i t_k}` of a skew-Hermitian `C`, returned as ascending `t_k`.
///
/// Computed as the eigenvalues of the Hermitian matrix `-iC`.
pub fn skew_hermitian_eigenvalues(c: &ComplexMatrix) -> Result<Vec<f64>> {
    let deviation = c.skew_deviation();
    if !c.is_finite() {
        return Err(Error::NonFinite);
    }
    if deviation > tol::EIGEN_RESIDUAL * c.max_abs().max(1.0) {
        return Err(Error::NotSkewHermitian { deviation });
    }
    let h = HermitianMatrix::symmetrize(c.scale(Complex64::new(0.0, -1.0)));
    hermitian_eigenvalues(&h)
}

/// Singular values in descending order.
///
/// They are read off the spectrum `{±σ_k}` of the Hermitian embedding
/// `[[0, A], [A*, 0]]`, which keeps small singular values accurate to
/// `ε·σ_max` (the `A*A` route squares the condition number).
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    let n = a.dim();
    let h = ComplexMatrix::from_fn(2 * n, |i, j| match (i < n, j < n) {
        (true, false) => a[(i, j - n)],
        (false, true) => a[(j, i - n)].conj(),
        _ => Complex64::new(0.0, 0.0),
    });
    let ev = hermitian_eigenvalues(&HermitianMatrix::symmetrize(h))?;
    Ok(ev[n..].iter().rev().map(|s| s.max(0.0)).collect())
}

/// Number of singular values above `tol · max(1, σ_max)`.
pub fn rank_numeric(a: &ComplexMatrix, tol: f64) -> Result<usize> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument("rank tolerance must be positive"));
    }
    let sv = singular_values(a)?;
    let cutoff = tol * sv.first().copied().unwrap_or(0.0).max(1.0);
    Ok(sv.iter().filter(|&&s| s > cutoff).count())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn skew_spectrum_of_scaled_z() {
        // [X, Y] = √2 i Z = i diag(1, -1)
        let cxy = ComplexMatrix::from_rows([[c(0.0, 1.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, -1.0)]]);
        let t = skew_hermitian_eigenvalues(&cxy).unwrap();
        assert!((t[0] + 1.0).abs() < 1e-15 && (t[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn skew_spectrum_of_zero() {
        assert_eq!(skew_hermitian_eigenvalues(&ComplexMatrix::zeros(3)).unwrap(), [0.0; 3]);
    }

    #[test]
    fn skew_spectrum_rejects_hermitian_input() {
        let h = ComplexMatrix::identity(2);
        assert!(matches!(skew_hermitian_eigenvalues(&h), Err(Error::NotSkewHermitian { .. })));
    }

    #[test]
    fn lemma_commutator_spectrum_is_nonzero_and_traceless() {
        // C1 = [diag(1,2,4), B] with ξ = 0 and Im(αβγ̄) ≠ 0
        let (alpha, beta, gamma) = (c(1.0, 0.5), c(0.7, -0.2), c(-0.3, 1.1));
        let b = ComplexMatrix::from_rows([
            [c(0.0, 0.0), alpha, gamma],
            [alpha.conj(), c(0.0, 0.0), beta],
            [gamma.conj(), beta.conj(), c(0.0, 0.0)],
        ]);
        let a = ComplexMatrix::diagonal(&[1.0, 2.0, 4.0]);
        let c1 = commutator(&a, &b).unwrap();
        let t = skew_hermitian_eigenvalues(&c1).unwrap();
        assert!(t.iter().all(|v| v.abs() > 1e-3), "{t:?}");
        assert!(t.iter().sum::<f64>().abs() < 1e-12);
        // det C1 = (a1-a2)(a2-a3)(a3-a1)(αβγ̄ - conj(αβγ̄))
        let w = alpha * beta * gamma.conj();
        let expected = (w - w.conj()) * ((1.0 - 2.0) * (2.0 - 4.0) * (4.0 - 1.0));
        assert!((c1.det() - expected).norm() < 1e-12);
    }

    #[test]
    fn rank_of_outer_product_is_one() {
        let x = [c(0.5, 0.5), c(0.5, -0.5)];
        assert_eq!(rank_numeric(&outer(&x, &x), tol::RANK).unwrap(), 1);
    }

    #[test]
    fn rank_of_probe_commutator_is_three() {
        let b = ComplexMatrix::from_real_rows([[1.0, 1.0, 0.0], [1.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        let cm = ComplexMatrix::from_rows([
            [c(1.0, 0.0), c(1.0, 0.0), c(1.0, 1.0)],
            [c(1.0, 0.0), c(2.0, 0.0), c(1.0, -1.0)],
            [c(1.0, -1.0), c(1.0, 1.0), c(0.0, 0.0)],
        ]);
        let bc = commutator(&b, &cm).unwrap();
        assert!((bc.det() - c(0.0, -4.0)).norm() < 1e-10);
        assert_eq!(rank_numeric(&bc, tol::RANK).unwrap(), 3);
    }

    #[test]
    fn rank_of_zero_and_identity() {
        assert_eq!(rank_numeric(&ComplexMatrix::zeros(4), tol::RANK).unwrap(), 0);
        assert_eq!(rank_numeric(&ComplexMatrix::identity(4), tol::RANK).unwrap(), 4);
        assert!(rank_numeric(&ComplexMatrix::identity(2), 0.0).is_err());
    }

    #[test]
    fn commutator_with_projection_pencil_has_rank_at_most_two() {
        // [αP + γI, B] = α[P, B]; for rank-one P this is P B (I-P) - (I-P) B P
        let mut rng = Stream::new(99);
        for n in 2..=6 {
            for _ in 0..20 {
                let x = random_unit_vector(n, &mut rng).unwrap();
                let p = outer(&x, &x);
                let a = p.scale_real(1.7).shift(-0.4);
                let b = random_hermitian(n, &mut rng).unwrap();
                let r = rank_numeric(&commutator(&a, &b).unwrap(), tol::RANK).unwrap();
                assert!(r <= 2, "n={n} rank={r}");
            }
        }
    }

    #[test]
    fn rank_of_constructed_rank_k() {
        let mut rng = Stream::new(5);
        for k in 0..=4 {
            let a = random_rank_k_hermitian(4, k, &mut rng).unwrap();
            assert_eq!(rank_numeric(&a, tol::RANK).unwrap(), k);
        }
    }
}
