//! Candidate preserver maps `Φ(A) = s(A) · U A^† U* + f(A) I` and the
//! sampled checks that they preserve commutator radii, ranges or spectra.
//!
//! `A^†` is `A`, `Aᵗ`, `Ψ(A)` or `Ψ(A)ᵗ` depending on [`MapSpec::dagger`] and
//! [`MapSpec::psi`]. The scalar `s` is the sign rule `h(A)` in radius and
//! spectrum mode and `ε · (-1 if A ∈ 𝒮 else +1)` in range mode.
//!
//! Hash-based rules read a SHA-256 digest of the entries quantized at
//! `1e-9`, so `h` and `f` are deterministic functions of the matrix that do
//! not react to rounding noise.

use crate::prelude::*;
use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::matcore::{
    commutator, random_hermitian, random_rank_k_hermitian, random_unitary, ComplexMatrix, HermitianMatrix, Stream,
};
use crate::nrange::{commutator_interval, commutator_spectrum, interval_distance, intervals_equal, numerical_radius};
use crate::pauli2::{psi, Form};
use crate::structure::{affine_relation, asymmetry_witness, classify_d, DEFAULT_GAP_TOL};
use crate::{Error, Result};

/// Grid used to quantize entries before hashing.
pub const HASH_QUANTUM: f64 = 1e-9;
/// Unitarity tolerance of a [`MapSpec`].
pub const UNITARY_TOL: f64 = 1e-10;
/// Interval tolerance of [`sign_flip_invisibility`].
pub const FLIP_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dagger {
    Identity,
    Transpose,
}

/// `h(A) ∈ {-1, +1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case")]
pub enum SignRule {
    Plus,
    Minus,
    Hash { seed: u64 },
}

/// `f(A) ∈ ℝ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case")]
pub enum ShiftRule {
    Zero,
    /// `-s tr(A) / n` for the sign `s` applied to `A`, which makes every
    /// image traceless.
    Traceless,
    /// Uniform on `[-scale, scale)`, read off the digest.
    Hash {
        seed: u64,
        scale: f64,
    },
}

/// The exceptional set `𝒮 ⊆ 𝒟` of range mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case")]
pub enum ExceptionalSet {
    Empty,
    AllD,
    /// Members of `𝒟` whose digest has its low bit set.
    RandomD {
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Radius,
    Range,
    Spectrum,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapSpec {
    pub dim: usize,
    pub unitary: ComplexMatrix,
    pub dagger: Dagger,
    pub psi: bool,
    pub sign_rule: SignRule,
    pub shift_rule: ShiftRule,
    pub exceptional_set: ExceptionalSet,
    pub epsilon: i8,
}

impl MapSpec {
    /// The identity map on `dim`-square matrices.
    pub fn identity(dim: usize) -> Self {
        MapSpec {
            dim,
            unitary: ComplexMatrix::identity(dim),
            dagger: Dagger::Identity,
            psi: false,
            sign_rule: SignRule::Plus,
            shift_rule: ShiftRule::Zero,
            exceptional_set: ExceptionalSet::Empty,
            epsilon: 1,
        }
    }

    /// The identity map with `U` installed.
    pub fn with_unitary(unitary: ComplexMatrix) -> Self {
        let mut m = MapSpec::identity(unitary.dim());
        m.unitary = unitary;
        m
    }

    /// Sets `dagger` and `psi` to match one of the four 2x2 forms.
    pub fn with_form(mut self, form: Form) -> Self {
        self.dagger = if form.uses_transpose() { Dagger::Transpose } else { Dagger::Identity };
        self.psi = form.uses_psi();
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.unitary.dim() != self.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: self.unitary.dim() });
        }
        let deviation = self.unitary.unitary_deviation();
        if deviation.is_nan() || deviation > UNITARY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        if self.psi && self.dim != 2 {
            return Err(Error::UnsupportedDimension { dim: self.dim, reason: "psi is defined on 2x2 matrices" });
        }
        if self.epsilon != 1 && self.epsilon != -1 {
            return Err(Error::InvalidArgument("epsilon must be +1 or -1"));
        }
        Ok(())
    }
}

fn digest(seed: u64, tag: u8, a: &ComplexMatrix) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update([tag]);
    h.update((a.dim() as u64).to_le_bytes());
    for z in a.as_slice() {
        let re = (z.re / HASH_QUANTUM).round() as i64;
        let im = (z.im / HASH_QUANTUM).round() as i64;
        h.update(re.to_le_bytes());
        h.update(im.to_le_bytes());
    }
    h.finalize().into()
}

const SIGN_TAG: u8 = 1;
const SHIFT_TAG: u8 = 2;
const SET_TAG: u8 = 3;

pub fn sign_of(rule: SignRule, a: &HermitianMatrix) -> f64 {
    match rule {
        SignRule::Plus => 1.0,
        SignRule::Minus => -1.0,
        SignRule::Hash { seed } => {
            if digest(seed, SIGN_TAG, a)[0] & 1 == 0 {
                1.0
            } else {
                -1.0
            }
        }
    }
}

/// `f(A)` for an image carrying the sign `s`.
pub fn shift_of(rule: ShiftRule, a: &HermitianMatrix, s: f64) -> f64 {
    match rule {
        ShiftRule::Zero => 0.0,
        ShiftRule::Traceless => -s * a.trace_re() / a.dim() as f64,
        ShiftRule::Hash { seed, scale } => {
            let d = digest(seed, SHIFT_TAG, a);
            let mut word = [0u8; 8];
            word.copy_from_slice(&d[..8]);
            let u = (u64::from_le_bytes(word) >> 11) as f64 / (1u64 << 53) as f64;
            scale * (2.0 * u - 1.0)
        }
    }
}

/// `𝒮(A)`; never true outside `𝒟`.
pub fn in_exceptional_set(set: ExceptionalSet, a: &HermitianMatrix) -> Result<bool> {
    let member = || classify_d(a, DEFAULT_GAP_TOL).map(|c| c.in_d);
    match set {
        ExceptionalSet::Empty => Ok(false),
        ExceptionalSet::AllD => member(),
        ExceptionalSet::RandomD { seed } => Ok(digest(seed, SET_TAG, a)[0] & 1 == 1 && member()?),
    }
}

/// `Φ(A)`, with the sign chosen by `mode`.
pub fn apply_map(m: &MapSpec, a: &HermitianMatrix, mode: Mode) -> Result<HermitianMatrix> {
    m.validate()?;
    if a.dim() != m.dim {
        return Err(Error::DimensionMismatch { left: m.dim, right: a.dim() });
    }
    let mut x = if m.psi { psi(a)? } else { a.clone() };
    if m.dagger == Dagger::Transpose {
        x = x.transpose();
    }
    let s = match mode {
        Mode::Radius | Mode::Spectrum => sign_of(m.sign_rule, a),
        Mode::Range => {
            let flip = if in_exceptional_set(m.exceptional_set, a)? { -1.0 } else { 1.0 };
            f64::from(m.epsilon) * flip
        }
    };
    let image = x.conjugate_by(&m.unitary)?.scale(s).shift(shift_of(m.shift_rule, a, s));
    HermitianMatrix::new(image.into_matrix())
}

/// Rejects mode and dimension combinations the checks do not cover.
pub fn validate_mode(m: &MapSpec, mode: Mode) -> Result<()> {
    m.validate()?;
    if mode == Mode::Spectrum && m.dim != 2 {
        return Err(Error::UnsupportedDimension { dim: m.dim, reason: "spectrum mode is 2x2 only" });
    }
    Ok(())
}

/// Relative discrepancy between `[A, B]` and `[Φ(A), Φ(B)]` under `mode`.
pub fn mode_violation(
    mode: Mode,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    fa: &HermitianMatrix,
    fb: &HermitianMatrix,
) -> Result<f64> {
    let v = match mode {
        Mode::Radius => {
            let r0 = numerical_radius(&commutator(a, b)?)?;
            let r1 = numerical_radius(&commutator(fa, fb)?)?;
            (r0 - r1).abs() / 1f64.max(r0).max(r1)
        }
        Mode::Range => interval_distance(&commutator_interval(a, b)?, &commutator_interval(fa, fb)?),
        Mode::Spectrum => {
            let s0 = commutator_spectrum(a, b)?;
            let s1 = commutator_spectrum(fa, fb)?;
            let scale = s0.iter().chain(&s1).fold(1f64, |acc, t| acc.max(t.abs()));
            s0.iter().zip(&s1).fold(0f64, |acc, (x, y)| acc.max((x - y).abs())) / scale
        }
    };
    Ok(if v.is_nan() { f64::INFINITY } else { v })
}

/// `αP + δI` with `P` a Haar-rotated projection of uniformly drawn rank.
pub fn random_d_member<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<HermitianMatrix> {
    let u = random_unitary(n, rng)?;
    let rank = rng.random_range(0..=n);
    let alpha = 4.0 * rng.random::<f64>() - 2.0;
    let delta = 4.0 * rng.random::<f64>() - 2.0;
    let diag: Vec<f64> = (0..n).map(|k| if k < rank { alpha + delta } else { delta }).collect();
    HermitianMatrix::diagonal(&diag).conjugate_by(&u)
}

/// One pair from the mixed pool: GUE pairs, low-rank pairs, members of
/// `𝒟`, pairs sharing an eigenbasis, and GUE against low rank or `𝒟`.
pub fn sample_pair<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<(HermitianMatrix, HermitianMatrix)> {
    let low_rank = |rng: &mut R| {
        let k = rng.random_range(1..=n.min(2));
        random_rank_k_hermitian(n, k, rng)
    };
    match rng.random_range(0..5u8) {
        0 => Ok((random_hermitian(n, rng)?, random_hermitian(n, rng)?)),
        1 => Ok((low_rank(rng)?, low_rank(rng)?)),
        2 => {
            let a = random_d_member(n, rng)?;
            let b = if rng.random::<bool>() { random_d_member(n, rng)? } else { random_hermitian(n, rng)? };
            Ok((a, b))
        }
        3 => {
            let u = random_unitary(n, rng)?;
            let spectrum = |rng: &mut R| (0..n).map(|_| 4.0 * rng.random::<f64>() - 2.0).collect::<Vec<_>>();
            let a = HermitianMatrix::diagonal(&spectrum(rng)).conjugate_by(&u)?;
            let b = HermitianMatrix::diagonal(&spectrum(rng)).conjugate_by(&u)?;
            Ok((a, b))
        }
        _ => {
            let a = random_hermitian(n, rng)?;
            let b = if rng.random::<bool>() { low_rank(rng)? } else { random_d_member(n, rng)? };
            Ok((a, b))
        }
    }
}

/// A pair `(A, B)` whose images fail the check, with the images.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub trial: u64,
    pub a: HermitianMatrix,
    pub b: HermitianMatrix,
    pub image_a: HermitianMatrix,
    pub image_b: HermitianMatrix,
    pub violation: f64,
}

/// Result of one trial; see [`run_trial`].
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub index: u64,
    pub violation: f64,
    pub pair: (HermitianMatrix, HermitianMatrix),
    pub images: (HermitianMatrix, HermitianMatrix),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreservationReport {
    pub mode: Mode,
    pub trials: u64,
    pub max_violation: f64,
    pub first_counterexample: Option<Counterexample>,
    pub seed: u64,
}

impl PreservationReport {
    pub fn passed(&self) -> bool {
        self.first_counterexample.is_none()
    }
}

/// Trial `index` of the stream `seed`. Each trial draws its pair from its own
/// substream, so trials may run in any order.
pub fn run_trial(m: &MapSpec, mode: Mode, seed: u64, index: u64) -> Result<TrialOutcome> {
    let mut rng = Stream::substream(seed, index);
    let (a, b) = sample_pair(m.dim, &mut rng)?;
    let fa = apply_map(m, &a, mode)?;
    let fb = apply_map(m, &b, mode)?;
    let violation = mode_violation(mode, &a, &b, &fa, &fb)?;
    Ok(TrialOutcome { index, violation, pair: (a, b), images: (fa, fb) })
}

/// Folds outcomes in trial order into a report.
pub fn fold_outcomes<I>(mode: Mode, seed: u64, tol: f64, outcomes: I) -> PreservationReport
where
    I: IntoIterator<Item = TrialOutcome>,
{
    let mut report = PreservationReport { mode, trials: 0, max_violation: 0.0, first_counterexample: None, seed };
    for o in outcomes {
        report.trials += 1;
        report.max_violation = report.max_violation.max(o.violation);
        if o.violation > tol && report.first_counterexample.is_none() {
            let ((a, b), (image_a, image_b)) = (o.pair, o.images);
            report.first_counterexample =
                Some(Counterexample { trial: o.index, a, b, image_a, image_b, violation: o.violation });
        }
    }
    report
}

/// Runs `trials` trials sequentially; counterexample iff some violation
/// exceeds `tol`.
pub fn check_preservation(m: &MapSpec, mode: Mode, trials: u64, seed: u64, tol: f64) -> Result<PreservationReport> {
    validate_mode(m, mode)?;
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1"));
    }
    let outcomes = (0..trials).map(|k| run_trial(m, mode, seed, k)).collect::<Result<Vec<_>>>()?;
    Ok(fold_outcomes(mode, seed, tol, outcomes))
}

/// Whether negating `Φ(A)` leaves `W([Φ(A), Φ(B)])` unchanged for `trials`
/// choices of `B`. The first `B` is the asymmetry witness of `A` when one
/// exists; the rest are GUE draws.
pub fn sign_flip_invisibility<R: Rng + ?Sized>(
    m: &MapSpec,
    a: &HermitianMatrix,
    trials: usize,
    rng: &mut R,
) -> Result<bool> {
    if a.dim() < 2 {
        return Err(Error::UnsupportedDimension { dim: a.dim(), reason: "needs dim >= 2" });
    }
    let fa = apply_map(m, a, Mode::Range)?;
    let neg = fa.scale(-1.0);
    let witness = if a.dim() >= 3 { asymmetry_witness(a)?.map(|w| w.b) } else { None };
    let mut witness = witness.into_iter();
    for _ in 0..trials {
        let b = match witness.next() {
            Some(b) => b,
            None => random_hermitian(a.dim(), rng)?,
        };
        let fb = apply_map(m, &b, Mode::Range)?;
        if !intervals_equal(&commutator_interval(&fa, &fb)?, &commutator_interval(&neg, &fb)?, FLIP_TOL) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `B = αA + βI` with `α = ±1`, to `tol · max(1, ‖A‖_max)`; `+1` first.
pub fn affine_sign_match(a: &HermitianMatrix, b: &HermitianMatrix, tol: f64) -> Result<Option<(i8, f64)>> {
    affine_relation(a, b, tol, 1f64.max(a.max_abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::AFFINE_TOL;
    use crate::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_map_is_identity() {
        let mut rng = Stream::new(1);
        let a = random_hermitian(3, &mut rng).unwrap();
        for mode in [Mode::Radius, Mode::Range] {
            assert_eq!(apply_map(&MapSpec::identity(3), &a, mode).unwrap(), a);
        }
    }

    #[test]
    fn traceless_shift() {
        let mut rng = Stream::new(2);
        let mut m = MapSpec::with_unitary(random_unitary(4, &mut rng).unwrap());
        m.shift_rule = ShiftRule::Traceless;
        m.sign_rule = SignRule::Hash { seed: 9 };
        for _ in 0..20 {
            let a = random_hermitian(4, &mut rng).unwrap().shift(3.0);
            assert!(apply_map(&m, &a, Mode::Radius).unwrap().trace_re().abs() < 1e-12);
        }
    }

    #[test]
    fn psi_form_display() {
        let a =
            HermitianMatrix::new(ComplexMatrix::from_rows([[c(1.0, 0.0), c(2.0, 3.0)], [c(2.0, -3.0), c(4.0, 0.0)]]))
                .unwrap();
        let m = MapSpec::identity(2).with_form(Form::Psi);
        let want = ComplexMatrix::from_rows([[c(1.0, 0.0), c(-2.0, 3.0)], [c(-2.0, -3.0), c(4.0, 0.0)]]);
        assert_eq!(*apply_map(&m, &a, Mode::Spectrum).unwrap().as_matrix(), want);
    }

    #[test]
    fn invalid_specs_rejected() {
        let a = HermitianMatrix::identity(3);
        let mut m = MapSpec::identity(3);
        m.psi = true;
        assert!(apply_map(&m, &a, Mode::Radius).is_err());
        let mut m = MapSpec::identity(3);
        m.unitary = ComplexMatrix::identity(3).scale_real(1.1);
        assert!(apply_map(&m, &a, Mode::Radius).is_err());
        assert!(check_preservation(&MapSpec::identity(3), Mode::Spectrum, 5, 0, 1e-9).is_err());
        assert!(check_preservation(&MapSpec::identity(3), Mode::Radius, 0, 0, 1e-9).is_err());
    }

    #[test]
    fn hash_rules_are_quantized_functions() {
        let mut rng = Stream::new(3);
        let a = random_hermitian(3, &mut rng).unwrap();
        let rule = ShiftRule::Hash { seed: 4, scale: 10.0 };
        let f = shift_of(rule, &a, 1.0);
        assert!(f.abs() <= 10.0);
        assert_eq!(shift_of(rule, &a.clone(), -1.0), f);
        let signs: Vec<f64> =
            (0..64).map(|_| sign_of(SignRule::Hash { seed: 5 }, &random_hermitian(3, &mut rng).unwrap())).collect();
        assert!(signs.contains(&1.0) && signs.contains(&-1.0));
    }

    #[test]
    fn exceptional_set_stays_inside_d() {
        let mut rng = Stream::new(6);
        for _ in 0..20 {
            let g = random_hermitian(3, &mut rng).unwrap();
            assert!(!in_exceptional_set(ExceptionalSet::AllD, &g).unwrap());
            assert!(!in_exceptional_set(ExceptionalSet::RandomD { seed: 1 }, &g).unwrap());
            let d = random_d_member(3, &mut rng).unwrap();
            assert!(in_exceptional_set(ExceptionalSet::AllD, &d).unwrap());
        }
    }

    #[test]
    fn identity_has_no_violations() {
        for (n, mode) in [(3, Mode::Radius), (3, Mode::Range), (2, Mode::Spectrum)] {
            let r = check_preservation(&MapSpec::identity(n), mode, 50, 11, 1e-12).unwrap();
            assert!(r.passed() && r.max_violation == 0.0, "{mode:?}");
        }
    }

    #[test]
    fn transpose_radius_form_passes() {
        let mut rng = Stream::new(7);
        let mut m = MapSpec::with_unitary(random_unitary(4, &mut rng).unwrap());
        m.dagger = Dagger::Transpose;
        m.sign_rule = SignRule::Hash { seed: 2 };
        m.shift_rule = ShiftRule::Hash { seed: 3, scale: 5.0 };
        let r = check_preservation(&m, Mode::Radius, 200, 1, 1e-9).unwrap();
        assert!(r.passed(), "{}", r.max_violation);
    }

    #[test]
    fn transpose_range_form_fails() {
        let mut m = MapSpec::identity(3);
        m.dagger = Dagger::Transpose;
        let r = check_preservation(&m, Mode::Range, 200, 1, 1e-9).unwrap();
        let cx = r.first_counterexample.expect("transpose reflects asymmetric ranges");
        assert!(cx.violation > 1e-9);
    }

    #[test]
    fn range_form_with_exceptional_set_passes() {
        let mut rng = Stream::new(8);
        let mut m = MapSpec::with_unitary(random_unitary(3, &mut rng).unwrap());
        m.epsilon = -1;
        m.exceptional_set = ExceptionalSet::AllD;
        m.shift_rule = ShiftRule::Traceless;
        let r = check_preservation(&m, Mode::Range, 200, 4, 1e-9).unwrap();
        assert!(r.passed(), "{}", r.max_violation);
    }

    #[test]
    fn report_is_deterministic() {
        let mut m = MapSpec::identity(3);
        m.dagger = Dagger::Transpose;
        let a = check_preservation(&m, Mode::Range, 30, 5, 1e-9).unwrap();
        let b = check_preservation(&m, Mode::Range, 30, 5, 1e-9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sign_flip_examples() {
        let mut rng = Stream::new(9);
        let m = MapSpec::identity(4);
        let p = HermitianMatrix::diagonal(&[1.0, 1.0, 0.0, 0.0]);
        assert!(sign_flip_invisibility(&m, &p, 20, &mut rng).unwrap());
        assert!(sign_flip_invisibility(&m, &HermitianMatrix::zeros(4), 5, &mut rng).unwrap());
        let m3 = MapSpec::identity(3);
        assert!(!sign_flip_invisibility(&m3, &HermitianMatrix::diagonal(&[1.0, 2.0, 3.0]), 1, &mut rng).unwrap());
    }

    #[test]
    fn affine_examples() {
        let mut rng = Stream::new(10);
        let a = random_hermitian(3, &mut rng).unwrap();
        let (alpha, beta) = affine_sign_match(&a, &a.scale(-1.0).shift(3.0), AFFINE_TOL).unwrap().unwrap();
        assert_eq!(alpha, -1);
        assert!((beta - 3.0).abs() < 1e-12);
        assert_eq!(affine_sign_match(&a, &a, AFFINE_TOL).unwrap(), Some((1, 0.0)));
        assert_eq!(affine_sign_match(&a, &a.transpose(), AFFINE_TOL).unwrap(), None);
    }

    #[test]
    fn spec_serializes_by_preset() {
        let mut m = MapSpec::identity(2);
        m.sign_rule = SignRule::Hash { seed: 3 };
        let v = serde_json::to_value(&m).unwrap();
        assert_eq!(v["sign_rule"]["preset"], "hash");
        assert_eq!(v["exceptional_set"]["preset"], "empty");
        assert_eq!(serde_json::from_value::<MapSpec>(v).unwrap(), m);
    }
}
