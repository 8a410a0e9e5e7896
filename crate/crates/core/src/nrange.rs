//! Numerical range `W(A) = {⟨Ax, x⟩ : ‖x‖ = 1}` and radius `w(A)`.
//!
//! General matrices go through the support function
//! `h(θ) = λ_max((e^{-iθ}A + e^{iθ}A*) / 2)`. A commutator of Hermitian
//! matrices is skew-Hermitian, hence normal, so its range is exactly the
//! segment `i[t_min, t_max]` spanned by its spectrum; that path never sweeps.

use crate::prelude::*;
use core::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::matcore::{
    commutator, hermitian_eigen, hermitian_eigenvalues, inner, norm, skew_hermitian_eigenvalues, tol, ComplexMatrix,
    HermitianMatrix,
};
use crate::{Error, Result};

/// Grid used by [`numerical_radius`] before refinement.
pub const SWEEP_ANGLES: usize = 720;
/// Final bracket width of the golden-section refinement.
pub const REFINE_WIDTH: f64 = 1e-10;
/// Default relative tolerance of [`interval_symmetric`].
pub const SYMMETRY_TOL: f64 = 1e-8;

/// `W([A, B]) = i[t_min, t_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CommutatorInterval {
    pub t_min: f64,
    pub t_max: f64,
}

impl CommutatorInterval {
    /// Endpoint magnitude, i.e. the numerical radius of the commutator.
    pub fn radius(&self) -> f64 {
        self.t_min.abs().max(self.t_max.abs())
    }

    /// `-W`: the interval negated and swapped.
    pub fn reflected(&self) -> Self {
        CommutatorInterval { t_min: -self.t_max, t_max: -self.t_min }
    }

    /// The interval for the commutator scaled by a real `s`.
    pub fn scaled(&self, s: f64) -> Self {
        if s >= 0.0 {
            CommutatorInterval { t_min: s * self.t_min, t_max: s * self.t_max }
        } else {
            CommutatorInterval { t_min: s * self.t_max, t_max: s * self.t_min }
        }
    }
}

/// Support points of `W(A)`, one per sampled direction.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeBoundary {
    pub points: Vec<Complex64>,
    pub angles: Vec<f64>,
    /// Unit top eigenvector of `H_θ` for each angle; `points[k] = ⟨A v_k, v_k⟩`.
    pub vectors: Vec<Vec<Complex64>>,
}

fn rotated_hermitian_part(a: &ComplexMatrix, theta: f64) -> HermitianMatrix {
    let e = Complex64::from_polar(1.0, -theta);
    let n = a.dim();
    HermitianMatrix::symmetrize(ComplexMatrix::from_fn(n, |i, j| (e * a[(i, j)] + e.conj() * a[(j, i)].conj()) * 0.5))
}

/// Support function of `W(A)` in direction `theta`.
pub fn support_value(a: &ComplexMatrix, theta: f64) -> Result<f64> {
    let ev = hermitian_eigenvalues(&rotated_hermitian_part(a, theta))?;
    Ok(*ev.last().expect("dimension is positive"))
}

/// `w(A) = sup |z|` over `z ∈ W(A)`.
///
/// Hermitian and skew-Hermitian inputs are answered from the spectrum; other
/// matrices are swept over [`SWEEP_ANGLES`] directions and the best bracket
/// is refined by golden-section search.
pub fn numerical_radius(a: &ComplexMatrix) -> Result<f64> {
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let scale = a.max_abs().max(1.0);
    if a.hermitian_deviation() <= tol::CONSTRUCTION * scale {
        let ev = hermitian_eigenvalues(&HermitianMatrix::symmetrize(a.clone()))?;
        return Ok(ev.iter().fold(0.0, |m: f64, v| m.max(v.abs())));
    }
    if a.skew_deviation() <= tol::CONSTRUCTION * scale {
        let t = skew_hermitian_eigenvalues(a)?;
        return Ok(t.iter().fold(0.0, |m: f64, v| m.max(v.abs())));
    }
    swept_radius(a)
}

/// The angle sweep alone, without the normal-matrix shortcuts.
pub fn swept_radius(a: &ComplexMatrix) -> Result<f64> {
    let step = TAU / SWEEP_ANGLES as f64;
    let mut best = f64::NEG_INFINITY;
    let mut best_k = 0;
    for k in 0..SWEEP_ANGLES {
        let v = support_value(a, k as f64 * step)?;
        if v > best {
            best = v;
            best_k = k;
        }
    }
    let centre = best_k as f64 * step;
    let refined = golden_max(|theta| support_value(a, theta), centre - step, centre + step)?;
    Ok(best.max(refined).max(0.0))
}

fn golden_max(mut f: impl FnMut(f64) -> Result<f64>, mut lo: f64, mut hi: f64) -> Result<f64> {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > REFINE_WIDTH {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1)?;
        }
    }
    Ok(f1.max(f2))
}

/// Support points of `W(A)` at `n_angles` uniform directions in `[0, 2π)`.
pub fn range_boundary(a: &ComplexMatrix, n_angles: usize) -> Result<RangeBoundary> {
    if n_angles == 0 {
        return Err(Error::InvalidArgument("n_angles must be positive"));
    }
    let mut points = Vec::with_capacity(n_angles);
    let mut angles = Vec::with_capacity(n_angles);
    let mut vectors = Vec::with_capacity(n_angles);
    for k in 0..n_angles {
        let theta = TAU * k as f64 / n_angles as f64;
        let e = hermitian_eigen(&rotated_hermitian_part(a, theta))?;
        let v = e.vector(a.dim() - 1);
        points.push(inner(&a.mul_vec(&v), &v));
        angles.push(theta);
        vectors.push(v);
    }
    Ok(RangeBoundary { points, angles, vectors })
}

/// Sorted `t_k` with `σ([A, B]) = {i t_k}`.
pub fn commutator_spectrum(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<Vec<f64>> {
    skew_hermitian_eigenvalues(&commutator(a, b)?)
}

/// `W([A, B]) = i[t_1, t_n]`, read off the spectrum of the commutator.
pub fn commutator_interval(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<CommutatorInterval> {
    let t = commutator_spectrum(a, b)?;
    Ok(CommutatorInterval { t_min: t[0], t_max: t[t.len() - 1] })
}

/// `W = -W`, i.e. `|t_min + t_max| ≤ tol · max(1, |t_min|, |t_max|)`.
pub fn interval_symmetric(iv: &CommutatorInterval, tol: f64) -> bool {
    let scale = 1f64.max(iv.t_min.abs()).max(iv.t_max.abs());
    (iv.t_min + iv.t_max).abs() <= tol * scale
}

/// Componentwise equality with a shared relative scale.
pub fn intervals_equal(a: &CommutatorInterval, b: &CommutatorInterval, tol: f64) -> bool {
    interval_distance(a, b) <= tol
}

/// `max(|Δt_min|, |Δt_max|) / max(1, largest endpoint magnitude)`.
pub fn interval_distance(a: &CommutatorInterval, b: &CommutatorInterval) -> f64 {
    let scale = 1f64.max(a.radius()).max(b.radius());
    (a.t_min - b.t_min).abs().max((a.t_max - b.t_max).abs()) / scale
}

/// `w([A, x ⊗ x]) = sqrt(⟨A²x, x⟩ - ⟨Ax, x⟩²)` for a unit vector `x`.
pub fn rank1_commutator_radius(a: &HermitianMatrix, x: &[Complex64]) -> Result<f64> {
    if x.len() != a.dim() {
        return Err(Error::DimensionMismatch { left: a.dim(), right: x.len() });
    }
    let r = norm(x);
    if (r - 1.0).abs() > tol::CONSTRUCTION {
        return Err(Error::NotUnitVector { norm: r });
    }
    // ⟨A²x, x⟩ - ⟨Ax, x⟩² = ‖Ax - ⟨Ax, x⟩x‖², evaluated in the residual form
    let ax = a.mul_vec(x);
    let mean = inner(&ax, x).re;
    let residual: Vec<Complex64> = ax.iter().zip(x).map(|(u, v)| u - v * mean).collect();
    Ok(norm(&residual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{outer, random_hermitian, random_unit_vector, Stream};
    use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pauli_x() -> HermitianMatrix {
        HermitianMatrix::new(ComplexMatrix::from_real_rows([[0.0, FRAC_1_SQRT_2], [FRAC_1_SQRT_2, 0.0]])).unwrap()
    }

    fn pauli_y() -> HermitianMatrix {
        HermitianMatrix::new(ComplexMatrix::from_rows([
            [c(0.0, 0.0), c(0.0, -FRAC_1_SQRT_2)],
            [c(0.0, FRAC_1_SQRT_2), c(0.0, 0.0)],
        ]))
        .unwrap()
    }

    #[test]
    fn support_of_real_diagonal() {
        let a = ComplexMatrix::diagonal(&[1.0, -1.0]);
        assert!((support_value(&a, 0.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn support_of_xy_commutator_at_right_angle() {
        let cxy = commutator(&pauli_x(), &pauli_y()).unwrap();
        assert!((support_value(&cxy, FRAC_PI_2).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn xy_interval_is_unit_segment() {
        let iv = commutator_interval(&pauli_x(), &pauli_y()).unwrap();
        assert!((iv.t_min + 1.0).abs() < 1e-14 && (iv.t_max - 1.0).abs() < 1e-14);
        assert!(interval_symmetric(&iv, SYMMETRY_TOL));
    }

    #[test]
    fn self_commutator_interval_is_zero() {
        let a = HermitianMatrix::diagonal(&[1.0, 5.0, -2.0]);
        let iv = commutator_interval(&a, &a).unwrap();
        assert_eq!((iv.t_min, iv.t_max), (0.0, 0.0));
        assert!(interval_symmetric(&iv, SYMMETRY_TOL));
    }

    #[test]
    fn radius_of_projection_commutator() {
        // P = x⊗x, Q = (x+y)⊗(x+y) with x ⟂ y unit: W([P,Q]) = [-i, i]
        let x = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let xy = [c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)];
        let com = commutator(&outer(&x, &x), &outer(&xy, &xy)).unwrap();
        assert!((numerical_radius(&com).unwrap() - 1.0).abs() < 1e-14);
        assert!((swept_radius(&com).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn radius_of_zero() {
        assert_eq!(numerical_radius(&ComplexMatrix::zeros(3)).unwrap(), 0.0);
        assert_eq!(swept_radius(&ComplexMatrix::zeros(3)).unwrap(), 0.0);
    }

    #[test]
    fn radius_of_jordan_block() {
        // W([[0,1],[0,0]]) is the disc of radius 1/2
        let j = ComplexMatrix::from_real_rows([[0.0, 1.0], [0.0, 0.0]]);
        assert!((numerical_radius(&j).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn symmetric_and_equal_predicates() {
        let sym = CommutatorInterval { t_min: -1.0, t_max: 1.0 };
        assert!(interval_symmetric(&sym, SYMMETRY_TOL));
        assert!(intervals_equal(&sym, &sym, 1e-12));
        let asym = CommutatorInterval { t_min: -2.0, t_max: 0.5 };
        assert!(!interval_symmetric(&asym, SYMMETRY_TOL));
        assert!(!intervals_equal(&asym, &asym.reflected(), 1e-9));
        let nudged = CommutatorInterval { t_min: -2.0 + 1e-12, t_max: 0.5 };
        assert!(intervals_equal(&asym, &nudged, 1e-10));
    }

    #[test]
    fn rank1_radius_examples() {
        let a = HermitianMatrix::diagonal(&[1.0, 0.0]);
        let x = [c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)];
        let r = rank1_commutator_radius(&a, &x).unwrap();
        assert!((r - 0.5).abs() < 1e-15);
        let oracle = numerical_radius(&commutator(&a, &outer(&x, &x)).unwrap()).unwrap();
        assert!((oracle - 0.5).abs() < 1e-15);

        let e1 = [c(1.0, 0.0), c(0.0, 0.0)];
        assert_eq!(rank1_commutator_radius(&a, &e1).unwrap(), 0.0);
        assert!(matches!(rank1_commutator_radius(&a, &[c(1.0, 0.0), c(1.0, 0.0)]), Err(Error::NotUnitVector { .. })));
    }

    #[test]
    fn boundary_points_are_attained() {
        let mut rng = Stream::new(42);
        let a = crate::matcore::sample::gaussian_matrix(3, &mut rng).unwrap();
        let b = range_boundary(&a, 64).unwrap();
        for (k, v) in b.vectors.iter().enumerate() {
            assert!((norm(v) - 1.0).abs() < 1e-12);
            let z = inner(&a.mul_vec(v), v);
            assert!((z - b.points[k]).norm() <= 1e-10);
            let support = support_value(&a, b.angles[k]).unwrap();
            let proj = (z * Complex64::from_polar(1.0, -b.angles[k])).re;
            assert!((proj - support).abs() < 1e-10);
        }
    }

    #[test]
    fn support_dominates_random_samples() {
        let mut rng = Stream::new(8);
        let a = crate::matcore::sample::gaussian_matrix(4, &mut rng).unwrap();
        let thetas = [0.0, 0.7, 2.0, 4.5];
        let supports: Vec<f64> = thetas.iter().map(|&t| support_value(&a, t).unwrap()).collect();
        for _ in 0..10_000 {
            let v = random_unit_vector(4, &mut rng).unwrap();
            let z = inner(&a.mul_vec(&v), &v);
            for (t, s) in thetas.iter().zip(&supports) {
                assert!((z * Complex64::from_polar(1.0, -t)).re <= s + 1e-12);
            }
        }
    }

    #[test]
    fn interval_fast_path_matches_generic_radius() {
        let mut rng = Stream::new(3);
        for n in 2..=5 {
            let a = random_hermitian(n, &mut rng).unwrap();
            let b = random_hermitian(n, &mut rng).unwrap();
            let iv = commutator_interval(&a, &b).unwrap();
            let com = commutator(&a, &b).unwrap();
            assert!((swept_radius(&com).unwrap() - iv.radius()).abs() < 1e-9);
        }
    }
}
