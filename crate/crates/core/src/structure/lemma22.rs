//! Two Hermitian matrices have equal commutator radii against every rank-one
//! projection exactly when `B = ±A + βI`. The closed form is checked first;
//! sampled projections can only separate, never certify.

use crate::prelude::*;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::matcore::{random_unit_vector, HermitianMatrix};
use crate::nrange::rank1_commutator_radius;
use crate::{Error, Result};

/// Relative residual accepted for `B = αA + βI`.
pub const AFFINE_TOL: f64 = 1e-8;
/// Worst sampled gap below which a non-affine pair is only "inconclusive".
pub const SEPARATION_GAP: f64 = 1e-6;
/// Largest sampled gap tolerated for an affinely related pair.
const CONSISTENCY_GAP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Related,
    NotRelated,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma22Verdict {
    pub relation: Relation,
    pub alpha: Option<i8>,
    pub beta: Option<f64>,
    /// `max |w([A, P]) - w([B, P])|` over the sampled projections.
    pub worst_gap: f64,
    pub samples: usize,
    /// Unit vector `x` of the projection `x ⊗ x` attaining `worst_gap`.
    pub separating_vector: Option<Vec<Complex64>>,
}

impl Lemma22Verdict {
    pub fn related(&self) -> bool {
        self.relation == Relation::Related
    }
}

/// First `α ∈ {+1, -1}` with `‖B - αA - βI‖_max ≤ tol · scale`, where
/// `β = tr(B - αA) / n`.
pub fn affine_relation(a: &HermitianMatrix, b: &HermitianMatrix, tol: f64, scale: f64) -> Result<Option<(i8, f64)>> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { left: a.dim(), right: b.dim() });
    }
    let n = a.dim() as f64;
    for alpha in [1i8, -1] {
        let diff = &**b - &a.scale_real(f64::from(alpha));
        let beta = diff.trace().re / n;
        if diff.shift(-beta).max_abs() <= tol * scale {
            return Ok(Some((alpha, beta)));
        }
    }
    Ok(None)
}

pub fn lemma22_check<R: Rng + ?Sized>(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    n_projections: usize,
    rng: &mut R,
) -> Result<Lemma22Verdict> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { left: a.dim(), right: b.dim() });
    }
    if n_projections == 0 {
        return Err(Error::InvalidArgument("n_projections must be at least 1"));
    }
    let scale = 1f64.max(a.max_abs()).max(b.max_abs());
    let affine = affine_relation(a, b, AFFINE_TOL, scale)?;

    let mut worst_gap = 0.0;
    let mut separating = None;
    for _ in 0..n_projections {
        let x = random_unit_vector(a.dim(), rng)?;
        let gap = (rank1_commutator_radius(a, &x)? - rank1_commutator_radius(b, &x)?).abs();
        if separating.is_none() || gap > worst_gap {
            worst_gap = gap;
            separating = Some(x);
        }
    }

    let (relation, alpha, beta) = match affine {
        Some((alpha, beta)) => {
            if worst_gap > CONSISTENCY_GAP * scale {
                return Err(Error::Lemma22Inconsistent { gap: worst_gap });
            }
            separating = None;
            (Relation::Related, Some(alpha), Some(beta))
        }
        None if worst_gap > SEPARATION_GAP => (Relation::NotRelated, None, None),
        None => (Relation::Inconclusive, None, None),
    };
    Ok(Lemma22Verdict { relation, alpha, beta, worst_gap, samples: n_projections, separating_vector: separating })
}
