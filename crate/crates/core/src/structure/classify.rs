use crate::prelude::*;
use serde::{Deserialize, Serialize};

use crate::matcore::{
    hermitian_eigen, hermitian_eigenvalues, inner, norm, outer, ComplexMatrix, EigenDecomposition, HermitianMatrix,
};
use crate::nrange::{commutator_interval, interval_symmetric, CommutatorInterval, SYMMETRY_TOL};
use crate::{Error, Result};

/// Eigenvalue gaps at or below `DEFAULT_GAP_TOL · max(diameter, max|λ|)`
/// merge into one cluster.
pub const DEFAULT_GAP_TOL: f64 = 1e-6;

/// Off-diagonal coefficient of the asymmetry witness, tried in order.
pub const WITNESS_BETAS: [Complex64; 4] =
    [Complex64::new(0.0, 1.0), Complex64::new(1.0, 1.0), Complex64::new(2.0, 1.0), Complex64::new(1.0, 2.0)];

const PROJECTION_TOL: f64 = 1e-9;
const DECOMPOSITION_TOL: f64 = 1e-8;
const KRYLOV_TOL: f64 = 1e-6;

/// A run of eigenvalues (in ascending eigen order) closer than the gap rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    pub start: usize,
    pub end: usize,
    pub mean: f64,
}

/// Membership of a Hermitian matrix in `𝒟`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DClassification {
    pub in_d: bool,
    /// Number of eigenvalue clusters found.
    pub clusters: usize,
    /// Spectral projection onto the upper cluster (zero for a scalar matrix).
    pub projection: Option<HermitianMatrix>,
    pub alpha: f64,
    pub delta: f64,
    /// `‖A - (αP + δI)‖_max` when at most two clusters were found.
    pub residual: Option<f64>,
    /// Closest relative distance of any eigenvalue gap to the cluster
    /// threshold; small values flag a near-threshold decision.
    pub margin: Option<f64>,
}

/// Clusters of the ascending spectrum under the relative gap rule.
pub fn spectral_clusters(eigen: &EigenDecomposition, gap_tol: f64) -> (Vec<Cluster>, Option<f64>) {
    let ev = &eigen.eigenvalues;
    let n = ev.len();
    let diameter = ev[n - 1] - ev[0];
    let magnitude = ev[0].abs().max(ev[n - 1].abs());
    let threshold = gap_tol * diameter.max(magnitude);

    let mut clusters = Vec::new();
    let mut margin: Option<f64> = None;
    let mut start = 0;
    for k in 1..=n {
        let split = if k == n {
            true
        } else {
            let gap = ev[k] - ev[k - 1];
            if threshold > 0.0 {
                let m = (gap - threshold).abs() / threshold;
                margin = Some(margin.map_or(m, |old| old.min(m)));
            }
            gap > threshold
        };
        if split {
            let mean = ev[start..k].iter().sum::<f64>() / (k - start) as f64;
            clusters.push(Cluster { start, end: k, mean });
            start = k;
        }
    }
    (clusters, margin)
}

fn classify_with(a: &HermitianMatrix, eigen: &EigenDecomposition, gap_tol: f64) -> (DClassification, Vec<Cluster>) {
    let n = a.dim();
    let (clusters, margin) = spectral_clusters(eigen, gap_tol);
    let mut out = DClassification {
        in_d: false,
        clusters: clusters.len(),
        projection: None,
        alpha: 0.0,
        delta: 0.0,
        residual: None,
        margin,
    };
    let (projection, alpha, delta) = match clusters.as_slice() {
        [only] => (HermitianMatrix::zeros(n), 0.0, only.mean),
        [low, high] => {
            let mut p = ComplexMatrix::zeros(n);
            for k in high.start..high.end {
                let v = eigen.vector(k);
                p = &p + &outer(&v, &v);
            }
            (HermitianMatrix::symmetrize(p), high.mean - low.mean, low.mean)
        }
        _ => return (out, clusters),
    };
    let rebuilt = projection.scale(alpha).shift(delta);
    let residual = a.max_diff(&rebuilt);
    let p_defect = (&(&*projection * &*projection) - &*projection).max_abs();
    out.residual = Some(residual);
    out.in_d = residual <= DECOMPOSITION_TOL * a.max_abs().max(1.0) && p_defect <= PROJECTION_TOL;
    out.alpha = alpha;
    out.delta = delta;
    out.projection = Some(projection);
    (out, clusters)
}

/// Decides `A ∈ 𝒟` by clustering the spectrum: at most two clusters, and
/// the matrix is reproduced by `αP + δI` with `δ` the lower and `δ + α` the
/// upper cluster mean.
pub fn classify_d(a: &HermitianMatrix, gap_tol: f64) -> Result<DClassification> {
    if gap_tol.is_nan() || gap_tol <= 0.0 {
        return Err(Error::InvalidArgument("gap tolerance must be positive"));
    }
    let eigen = hermitian_eigen(a)?;
    Ok(classify_with(a, &eigen, gap_tol).0)
}

/// A vector `x` with `{x, Ax, A²x}` linearly independent, or `None` when
/// `A ∈ 𝒟` (a quadratic polynomial then annihilates `A`).
///
/// `x` is the normalized sum of one eigenvector from each of three clusters:
/// the lowest, the highest, and the interior cluster farthest from both.
pub fn independence_vector(a: &HermitianMatrix) -> Result<Option<Vec<Complex64>>> {
    let n = a.dim();
    if n < 3 {
        return Err(Error::UnsupportedDimension { dim: n, reason: "needs n >= 3" });
    }
    let eigen = hermitian_eigen(a)?;
    let (class, clusters) = classify_with(a, &eigen, DEFAULT_GAP_TOL);
    if class.in_d {
        return Ok(None);
    }
    if clusters.len() < 3 {
        // two loose clusters: not reproduced by αP + δI, yet no third point
        return Err(Error::IllConditioned { smallest: 0.0 });
    }
    let low = &clusters[0];
    let high = &clusters[clusters.len() - 1];
    let mid = clusters[1..clusters.len() - 1]
        .iter()
        .max_by(|p, q| {
            let dp = (p.mean - low.mean).min(high.mean - p.mean);
            let dq = (q.mean - low.mean).min(high.mean - q.mean);
            dp.total_cmp(&dq)
        })
        .expect("at least three clusters");
    let mut x = alloc::vec![Complex64::new(0.0, 0.0); n];
    for c in [low, mid, high] {
        for (xi, vi) in x.iter_mut().zip(eigen.vector(c.start)) {
            *xi += vi;
        }
    }
    let x: Vec<Complex64> = x.iter().map(|z| z / 3f64.sqrt()).collect();

    // The span of {x, Ax, A²x} is shift invariant; test on the centred matrix.
    let centred = a.shift(-a.trace_re() / n as f64);
    let spectral = hermitian_eigenvalues(&centred)?.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    let smallest = krylov_smallest_singular(&centred, &x)?;
    if smallest <= KRYLOV_TOL * spectral * spectral {
        return Err(Error::IllConditioned { smallest });
    }
    Ok(Some(x))
}

fn krylov_columns(a: &ComplexMatrix, x: &[Complex64]) -> [Vec<Complex64>; 3] {
    let ax = a.mul_vec(x);
    let aax = a.mul_vec(&ax);
    [x.to_vec(), ax, aax]
}

fn krylov_smallest_singular(a: &ComplexMatrix, x: &[Complex64]) -> Result<f64> {
    let cols = krylov_columns(a, x);
    let gram = ComplexMatrix::from_fn(3, |i, j| inner(&cols[j], &cols[i]));
    let ev = hermitian_eigenvalues(&HermitianMatrix::symmetrize(gram))?;
    Ok(ev[0].max(0.0).sqrt())
}

/// A rank-two `B` whose commutator with `A` has an asymmetric range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymmetryWitness {
    pub b: HermitianMatrix,
    pub interval: CommutatorInterval,
    pub beta: Complex64,
}

/// For `A ∉ 𝒟`, builds `B = [[1, β], [β̄, 0]] ⊕ 0` in the orthonormal basis
/// obtained by Gram–Schmidt on `{x, Ax, A²x}`; `[A, B]` then has rank three
/// and trace zero, so its range `i[t_1, t_3]` is not symmetric. Returns
/// `None` for `A ∈ 𝒟`.
pub fn asymmetry_witness(a: &HermitianMatrix) -> Result<Option<AsymmetryWitness>> {
    let Some(x) = independence_vector(a)? else {
        return Ok(None);
    };
    let n = a.dim();
    let centred = a.shift(-a.trace_re() / n as f64);
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(3);
    for mut v in krylov_columns(&centred, &x) {
        for _ in 0..2 {
            for e in &basis {
                let r = inner(&v, e);
                for (vi, ei) in v.iter_mut().zip(e) {
                    *vi -= r * ei;
                }
            }
        }
        let r = norm(&v);
        v.iter_mut().for_each(|z| *z /= r);
        basis.push(v);
    }
    let (e1, e2) = (&basis[0], &basis[1]);
    for beta in WITNESS_BETAS {
        let m = &(&outer(e1, e1) + &outer(e1, e2).scale(beta)) + &outer(e2, e1).scale(beta.conj());
        let b = HermitianMatrix::symmetrize(m);
        let interval = commutator_interval(a, &b)?;
        if !interval_symmetric(&interval, SYMMETRY_TOL) {
            return Ok(Some(AsymmetryWitness { b, interval, beta }));
        }
    }
    Err(Error::WitnessExhausted)
}

/// For `A ∈ 𝒟` with spectral projection `P`, the unitary `U = P - (I - P)`,
/// which satisfies `U [A, B] U* = -[A, B]` for every Hermitian `B`.
/// `None` for `A ∉ 𝒟`.
pub fn symmetry_witness_unitary(a: &HermitianMatrix) -> Result<Option<ComplexMatrix>> {
    let class = classify_d(a, DEFAULT_GAP_TOL)?;
    if !class.in_d {
        return Ok(None);
    }
    let p = class.projection.expect("projection present for members of D");
    Ok(Some(p.scale(2.0).shift(-1.0).into_matrix()))
}
