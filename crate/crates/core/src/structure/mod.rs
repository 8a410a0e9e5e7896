//! Structural classifiers for Hermitian matrices and the constructive
//! witnesses behind them.
//!
//! `𝒟` is the set `{αP + δI}` of real combinations of an orthogonal
//! projection and the identity, equivalently the Hermitian matrices with at
//! most two distinct eigenvalues. For `n ≥ 3` membership in `𝒟` is exactly
//! the condition that every commutator `[A, B]` has a numerical range
//! symmetric about the origin; [`asymmetry_witness`] and
//! [`symmetry_witness_unitary`] build the evidence for either side.

mod classify;
mod lemma22;
mod probe;

pub use classify::{
    asymmetry_witness, classify_d, independence_vector, spectral_clusters, symmetry_witness_unitary, AsymmetryWitness,
    Cluster, DClassification, DEFAULT_GAP_TOL, WITNESS_BETAS,
};
pub use lemma22::{affine_relation, lemma22_check, Lemma22Verdict, Relation, AFFINE_TOL, SEPARATION_GAP};
pub use probe::{find_rank3_probe, probe_matrix, Probe, ProbeFamily, DEFAULT_GRID};
