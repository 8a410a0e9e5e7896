//! The acceptance battery as library code.
//!
//! Each criterion draws every item from its own substream and folds results
//! in item order. Reports carry no wall-clock time.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use commrange_core::maps::{Dagger, ExceptionalSet, MapSpec, Mode, ShiftRule, SignRule};
use commrange_core::matcore::{
    commutator, complex_gaussian, gaussian_matrix, inner, normalized, outer, random_hermitian, random_unit_vector,
    random_unitary, rank_numeric, tol, ComplexMatrix, HermitianMatrix, Stream,
};
use commrange_core::nrange::{
    commutator_interval, commutator_spectrum, interval_distance, numerical_radius, rank1_commutator_radius,
    swept_radius, SYMMETRY_TOL,
};
use commrange_core::pauli2::{cross_commutator, pauli_basis, skew_from_pauli, to_pauli, unitary_to_rotation, Form};
use commrange_core::structure::{
    asymmetry_witness, classify_d, lemma22_check, symmetry_witness_unitary, Relation, DEFAULT_GAP_TOL, SEPARATION_GAP,
};
use commrange_core::{maps, Complex64, Result};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::parallel;

/// Criterion ids and names, in run order.
pub const CRITERIA: [(u8, &str); 9] = [
    (1, "pauli_fixtures"),
    (2, "determinant_fixture"),
    (3, "rank1_radius_identity"),
    (4, "lemma22_oracle"),
    (5, "two_point_spectrum_symmetry"),
    (6, "radius_preserver_forms"),
    (7, "range_preserver_forms"),
    (8, "two_by_two_forms"),
    (9, "sweep_vs_sampling"),
];

const MAX_LISTED_FAILURES: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub checks: u64,
    pub failures: u64,
    /// Worst observed value per named quantity.
    pub metrics: BTreeMap<String, f64>,
    /// The first few failure descriptions.
    pub failure_notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub passed: bool,
    pub criteria: Vec<CriterionReport>,
}

/// How a metric aggregates over items.
#[derive(Clone, Copy)]
enum Agg {
    Max,
    Min,
}

/// One item's contribution to a criterion.
#[derive(Default)]
struct Item {
    metrics: Vec<(&'static str, Agg, f64)>,
    failures: Vec<String>,
}

impl Item {
    fn max(&mut self, name: &'static str, v: f64) -> &mut Self {
        self.metrics.push((name, Agg::Max, v));
        self
    }

    fn min(&mut self, name: &'static str, v: f64) -> &mut Self {
        self.metrics.push((name, Agg::Min, v));
        self
    }

    fn require(&mut self, ok: bool, note: impl FnOnce() -> String) -> &mut Self {
        if !ok {
            self.failures.push(note());
        }
        self
    }
}

struct Tally {
    id: u8,
    checks: u64,
    failures: u64,
    metrics: BTreeMap<String, f64>,
    notes: Vec<String>,
}

impl Tally {
    fn new(id: u8) -> Self {
        Tally { id, checks: 0, failures: 0, metrics: BTreeMap::new(), notes: Vec::new() }
    }

    fn add(&mut self, item: Item) {
        self.checks += 1;
        for (name, agg, v) in item.metrics {
            let v = if v.is_nan() { f64::INFINITY } else { v };
            self.metrics
                .entry(name.to_owned())
                .and_modify(|w| {
                    *w = match agg {
                        Agg::Max => w.max(v),
                        Agg::Min => w.min(v),
                    }
                })
                .or_insert(v);
        }
        self.failures += item.failures.len() as u64;
        for note in item.failures {
            if self.notes.len() < MAX_LISTED_FAILURES {
                self.notes.push(note);
            }
        }
    }

    fn finish(self) -> CriterionReport {
        let name = CRITERIA.iter().find(|(id, _)| *id == self.id).map(|(_, n)| *n).unwrap_or("unknown");
        CriterionReport {
            id: self.id,
            name: name.to_owned(),
            passed: self.failures == 0,
            checks: self.checks,
            failures: self.failures,
            metrics: self.metrics,
            failure_notes: self.notes,
        }
    }
}

fn rng(seed: u64, criterion: u8, item: u64) -> Stream {
    Stream::substream(seed, (u64::from(criterion) << 48) | item)
}

/// Seed for a preservation run, distinct per criterion and configuration.
fn run_seed(seed: u64, criterion: u8, config: u64) -> u64 {
    seed ^ (u64::from(criterion) << 56) ^ (config << 40)
}

/// Evaluates `count` items in parallel and folds them into `t` in index order.
fn tally_into(t: &mut Tally, count: u64, f: impl Fn(u64) -> Result<Item> + Sync) -> Result<()> {
    let items = (0..count).into_par_iter().map(&f).collect::<Result<Vec<_>>>()?;
    items.into_iter().for_each(|i| t.add(i));
    Ok(())
}

fn tally_items(id: u8, count: u64, f: impl Fn(u64) -> Result<Item> + Sync) -> Result<CriterionReport> {
    let mut t = Tally::new(id);
    tally_into(&mut t, count, f)?;
    Ok(t.finish())
}

/// Runs criteria 1-9 on a pool of `workers` threads (`0` = default).
pub fn run_suite(seed: u64, workers: usize) -> Result<SuiteReport> {
    parallel::with_workers(workers, || {
        let criteria = CRITERIA.iter().map(|(id, _)| run_criterion(*id, seed)).collect::<Result<Vec<_>>>()?;
        Ok(SuiteReport { seed, passed: criteria.iter().all(|c| c.passed), criteria })
    })
}

/// Runs one criterion on the current thread pool.
pub fn run_criterion(id: u8, seed: u64) -> Result<CriterionReport> {
    match id {
        1 => pauli_fixtures(),
        2 => determinant_fixture(),
        3 => rank1_identity(seed),
        4 => lemma22_oracle(seed),
        5 => two_point_symmetry(seed),
        6 => radius_forms(seed),
        7 => range_forms(seed),
        8 => two_by_two(seed),
        9 => sweep_vs_sampling(seed),
        _ => Err(commrange_core::Error::InvalidArgument("unknown criterion")),
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn pauli_fixtures() -> Result<CriterionReport> {
    const TOL: f64 = 1e-12;
    let mut t = Tally::new(1);
    let basis = pauli_basis();
    let names = ["X", "Y", "Z"];

    let mut item = Item::default();
    for j in 0..3 {
        for k in 0..3 {
            let ip = (basis[j].as_matrix() * &basis[k].adjoint()).trace();
            let want = if j == k { 1.0 } else { 0.0 };
            let err = (ip - c(want, 0.0)).norm();
            item.max("orthonormality_error", err)
                .require(err <= TOL, || format!("tr({}{}*) = {ip}", names[j], names[k]));
        }
    }
    t.add(item);

    let half = c(0.0, FRAC_1_SQRT_2);
    for (p, q, r) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        let (bp, bq, br) = (basis[p].as_matrix(), basis[q].as_matrix(), basis[r].as_matrix());
        let target = br.scale(half);
        let forward = (bp * bq).max_diff(&target);
        let backward = (-&(bq * bp)).max_diff(&target);
        let mut item = Item::default();
        item.max("product_identity_error", forward.max(backward)).require(forward.max(backward) <= TOL, || {
            format!(
                "{}{} = (i/√2){} = -{}{}: errors {forward:e}, {backward:e}",
                names[p], names[q], names[r], names[q], names[p]
            )
        });
        let iv = commutator_interval(&basis[p], &basis[q])?;
        let err = (iv.t_min + 1.0).abs().max((iv.t_max - 1.0).abs());
        item.max("interval_error", err)
            .require(err <= TOL, || format!("W([{}, {}]) = i[{}, {}]", names[p], names[q], iv.t_min, iv.t_max));
        t.add(item);
    }
    Ok(t.finish())
}

fn determinant_fixture() -> Result<CriterionReport> {
    let b = HermitianMatrix::new(ComplexMatrix::from_real_rows([[1.0, 1.0, 0.0], [1.0, 1.0, 0.0], [0.0, 0.0, 1.0]]))?;
    let cm = HermitianMatrix::new(ComplexMatrix::from_rows([
        [c(1.0, 0.0), c(1.0, 0.0), c(1.0, 1.0)],
        [c(1.0, 0.0), c(2.0, 0.0), c(1.0, -1.0)],
        [c(1.0, -1.0), c(1.0, 1.0), c(0.0, 0.0)],
    ]))?;
    let com = commutator(&b, &cm)?;
    let det = com.det();
    let err = (det - c(0.0, -4.0)).norm();
    let rank = rank_numeric(&com, tol::RANK)?;
    let mut item = Item::default();
    item.max("det_error", err)
        .max("rank", rank as f64)
        .require(err <= 1e-10, || format!("det([B, C]) = {det}"))
        .require(rank == 3, || format!("rank([B, C]) = {rank}"));
    let mut t = Tally::new(2);
    t.add(item);
    Ok(t.finish())
}

fn rank1_identity(seed: u64) -> Result<CriterionReport> {
    tally_items(3, 1000, |i| {
        let n = 2 + (i % 5) as usize;
        let mut r = rng(seed, 3, i);
        let a = random_hermitian(n, &mut r)?;
        let x = random_unit_vector(n, &mut r)?;
        let p = outer(&x, &x);
        let w = numerical_radius(&commutator(&a, &p)?)?;
        // ⟨A²x, x⟩ - ⟨Ax, x⟩² with A² formed explicitly
        let a2 = a.as_matrix() * a.as_matrix();
        let m1 = inner(&a.mul_vec(&x), &x).re;
        let m2 = inner(&a2.mul_vec(&x), &x).re;
        let oracle = (m2 - m1 * m1).max(0.0).sqrt();
        let fast = rank1_commutator_radius(&a, &x)?;
        let (e1, e2) = ((w - oracle).abs(), (fast - oracle).abs());
        let mut item = Item::default();
        item.max("radius_error", e1)
            .max("residual_form_error", e2)
            .require(e1.max(e2) <= 1e-9, || format!("item {i} (n={n}): w={w}, oracle={oracle}, residual form={fast}"));
        Ok(item)
    })
}

fn lemma22_oracle(seed: u64) -> Result<CriterionReport> {
    tally_items(4, 1000, |i| {
        let n = 2 + (i % 5) as usize;
        let mut r = rng(seed, 4, i);
        let a = random_hermitian(n, &mut r)?;
        let alpha: i8 = if r.random::<bool>() { 1 } else { -1 };
        let beta = 10.0 * r.random::<f64>() - 5.0;
        let related = a.scale(f64::from(alpha)).shift(beta);
        let mut item = Item::default();
        if i < 500 {
            let v = lemma22_check(&a, &related, 200, &mut r)?;
            let beta_err = v.beta.map_or(f64::INFINITY, |b| (b - beta).abs());
            item.max("related_beta_error", beta_err).require(
                v.relation == Relation::Related && v.alpha == Some(alpha) && beta_err <= 1e-9 * beta.abs().max(1.0),
                || format!("item {i}: expected ({alpha}, {beta}), got {:?} {:?} {:?}", v.relation, v.alpha, v.beta),
            );
        } else {
            let eta = 0.1 + 0.9 * r.random::<f64>();
            let bump = commrange_core::matcore::random_rank_k_hermitian(n, 1, &mut r)?.scale(eta);
            let b = related.add(&bump)?;
            let v = lemma22_check(&a, &b, 200, &mut r)?;
            let confirmed = match &v.separating_vector {
                Some(x) => (rank1_commutator_radius(&a, x)? - rank1_commutator_radius(&b, x)?).abs(),
                None => 0.0,
            };
            item.min("perturbed_worst_gap", v.worst_gap)
                .require(v.relation == Relation::NotRelated && v.samples <= 200 && confirmed > SEPARATION_GAP, || {
                    format!("item {i}: {:?}, gap {:e}, confirmed {confirmed:e}", v.relation, v.worst_gap)
                });
        }
        Ok(item)
    })
}

fn two_point_symmetry(seed: u64) -> Result<CriterionReport> {
    tally_items(5, 500, |i| {
        let n = 3 + (i % 4) as usize;
        let mut r = rng(seed, 5, i);
        let mut item = Item::default();
        if i % 2 == 0 {
            let a = maps::random_d_member(n, &mut r)?;
            let class = classify_d(&a, DEFAULT_GAP_TOL)?;
            item.require(class.in_d, || format!("item {i}: D member classified outside D"));
            let Some(u) = symmetry_witness_unitary(&a)? else {
                item.require(false, || format!("item {i}: no symmetry witness"));
                return Ok(item);
            };
            for _ in 0..100 {
                let b = random_hermitian(n, &mut r)?;
                let cm = commutator(&a, &b)?;
                let iv = commutator_interval(&a, &b)?;
                let asym = (iv.t_min + iv.t_max).abs() / iv.radius().max(1.0);
                let residual = (&(&(&u * &cm) * &u.adjoint()) + &cm).max_abs();
                item.max("member_asymmetry", asym).max("witness_residual", residual);
                if asym > SYMMETRY_TOL || residual > 1e-10 {
                    item.require(false, || format!("item {i}: asymmetry {asym:e}, residual {residual:e}"));
                    break;
                }
            }
        } else {
            let a = if i % 10 == 1 {
                let diag: Vec<f64> = (1..=n).map(|k| k as f64).collect();
                HermitianMatrix::diagonal(&diag).conjugate_by(&random_unitary(n, &mut r)?)?
            } else {
                random_hermitian(n, &mut r)?
            };
            let class = classify_d(&a, DEFAULT_GAP_TOL)?;
            item.require(!class.in_d, || format!("item {i}: non-member classified inside D"));
            match asymmetry_witness(&a)? {
                Some(w) => {
                    let s = (w.interval.t_min + w.interval.t_max).abs();
                    item.min("witness_asymmetry", s).require(s > 1e-6, || format!("item {i}: |t1 + t3| = {s:e}"));
                }
                None => {
                    item.require(false, || format!("item {i}: no asymmetry witness"));
                }
            }
        }
        Ok(item)
    })
}

fn preservation_item(
    m: &MapSpec,
    mode: Mode,
    trials: u64,
    seed: u64,
    tol: f64,
    label: &str,
) -> Result<(Item, maps::PreservationReport)> {
    let report = parallel::check_preservation(m, mode, trials, seed, tol)?;
    let v = report.max_violation;
    let mut item = Item::default();
    item.max("max_violation", v).require(report.passed(), || format!("{label}: violation {v:e}"));
    Ok((item, report))
}

fn radius_forms(seed: u64) -> Result<CriterionReport> {
    let mut t = Tally::new(6);
    let mut config = 0u64;
    for n in [3usize, 4, 6] {
        for dagger in [Dagger::Identity, Dagger::Transpose] {
            for sign in [SignRule::Plus, SignRule::Hash { seed: seed ^ 0x51 }] {
                for shift in [ShiftRule::Zero, ShiftRule::Traceless, ShiftRule::Hash { seed: seed ^ 0x5f, scale: 10.0 }]
                {
                    let mut m = MapSpec::with_unitary(random_unitary(n, &mut rng(seed, 6, config))?);
                    m.dagger = dagger;
                    m.sign_rule = sign;
                    m.shift_rule = shift;
                    let label = format!("n={n} {dagger:?} {sign:?} {shift:?}");
                    let (item, _) = preservation_item(&m, Mode::Radius, 1000, run_seed(seed, 6, config), 1e-9, &label)?;
                    t.add(item);
                    config += 1;
                }
            }
        }
    }
    Ok(t.finish())
}

fn range_forms(seed: u64) -> Result<CriterionReport> {
    let mut t = Tally::new(7);
    let mut config = 0u64;
    for n in [3usize, 4] {
        for epsilon in [1i8, -1] {
            for set in [ExceptionalSet::Empty, ExceptionalSet::AllD, ExceptionalSet::RandomD { seed: seed ^ 0x53 }] {
                let mut m = MapSpec::with_unitary(random_unitary(n, &mut rng(seed, 7, config))?);
                m.epsilon = epsilon;
                m.exceptional_set = set;
                m.shift_rule = ShiftRule::Hash { seed: seed ^ 0x5f, scale: 10.0 };
                let label = format!("n={n} epsilon={epsilon} {set:?}");
                let (item, _) = preservation_item(&m, Mode::Range, 1000, run_seed(seed, 7, config), 1e-9, &label)?;
                t.add(item);
                config += 1;
            }
        }
    }
    let mut m = MapSpec::with_unitary(random_unitary(3, &mut rng(seed, 7, config))?);
    m.dagger = Dagger::Transpose;
    let report = parallel::check_preservation(&m, Mode::Range, 1000, run_seed(seed, 7, config), 1e-9)?;
    let mut item = Item::default();
    match &report.first_counterexample {
        Some(cx) => {
            item.max("transpose_counterexample_trial", cx.trial as f64).max("transpose_violation", cx.violation);
        }
        None => {
            item.require(false, || "transpose form preserved every sampled range at n=3".to_owned());
        }
    }
    t.add(item);
    Ok(t.finish())
}

/// Whether `[A, B]` and `[C, D]` agree in spectrum, range and radius.
fn mode_verdicts(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    cm: &HermitianMatrix,
    d: &HermitianMatrix,
    tol: f64,
) -> Result<[bool; 3]> {
    let s0 = commutator_spectrum(a, b)?;
    let s1 = commutator_spectrum(cm, d)?;
    let scale = s0.iter().chain(&s1).fold(1f64, |m, t| m.max(t.abs()));
    let spectrum = s0.iter().zip(&s1).all(|(x, y)| (x - y).abs() <= tol * scale);
    let (i0, i1) = (commutator_interval(a, b)?, commutator_interval(cm, d)?);
    let range = interval_distance(&i0, &i1) <= tol;
    let radius = (i0.radius() - i1.radius()).abs() <= tol * scale;
    Ok([spectrum, range, radius])
}

fn two_by_two(seed: u64) -> Result<CriterionReport> {
    const TOL: f64 = 1e-10;
    let mut t = Tally::new(8);
    for (k, form) in Form::ALL.into_iter().enumerate() {
        let k = k as u64;
        let mut m = MapSpec::with_unitary(random_unitary(2, &mut rng(seed, 8, k))?).with_form(form);
        m.sign_rule = SignRule::Hash { seed: seed ^ 0x81 };
        m.shift_rule = ShiftRule::Hash { seed: seed ^ 0x82, scale: 10.0 };
        let run = run_seed(seed, 8, k);
        let mut passes = Vec::new();
        for mode in [Mode::Spectrum, Mode::Range, Mode::Radius] {
            let label = format!("form {} {mode:?}", form.number());
            let (item, report) = preservation_item(&m, mode, 2000, run, TOL, &label)?;
            passes.push(report.passed());
            t.add(item);
        }
        let mut item = Item::default();
        item.require(passes.iter().all(|p| *p == passes[0]), || {
            format!("form {}: modes disagree {passes:?}", form.number())
        });
        t.add(item);
    }

    tally_into(&mut t, 2000, |i| {
        let mut r = rng(seed, 8, 100 + i);
        let a = random_hermitian(2, &mut r)?;
        let b = random_hermitian(2, &mut r)?;
        let (cm, d) = match i % 4 {
            0 => {
                let form = Form::ALL[(i / 4 % 4) as usize];
                let m = MapSpec::with_unitary(random_unitary(2, &mut r)?).with_form(form);
                (maps::apply_map(&m, &a, Mode::Spectrum)?, maps::apply_map(&m, &b, Mode::Spectrum)?)
            }
            1 => (b.clone(), a.clone()),
            2 => (a.scale(2.0), b.clone()),
            _ => (random_hermitian(2, &mut r)?, random_hermitian(2, &mut r)?),
        };
        let v = mode_verdicts(&a, &b, &cm, &d, TOL)?;
        let mut item = Item::default();
        item.require(v[0] == v[1] && v[1] == v[2], || format!("pair {i}: spectrum/range/radius verdicts {v:?}"));
        Ok(item)
    })?;

    tally_into(&mut t, 1000, |i| {
        let mut r = rng(seed, 8, 10_000 + i);
        let a = random_hermitian(2, &mut r)?;
        let b = random_hermitian(2, &mut r)?;
        let cv = cross_commutator(&to_pauli(&a)?, &to_pauli(&b)?);
        let err = skew_from_pauli(&cv.a).max_diff(&commutator(&a, &b)?);
        let mut item = Item::default();
        item.max("cross_identity_error", err).require(err <= 1e-12, || format!("pair {i}: error {err:e}"));
        Ok(item)
    })?;

    tally_into(&mut t, 1000, |i| {
        let u = random_unitary(2, &mut rng(seed, 8, 20_000 + i))?;
        let rot = unitary_to_rotation(&u)?;
        let (orth, det) = (rot.orthogonality_defect(), (rot.det - 1.0).abs());
        let mut item = Item::default();
        item.max("rotation_orthogonality_defect", orth)
            .max("rotation_det_error", det)
            .require(orth <= 1e-10 && det <= 1e-10, || format!("unitary {i}: defect {orth:e}, det {}", rot.det));
        Ok(item)
    })?;
    Ok(t.finish())
}

const SPREAD_STRIDE: usize = 40;

/// Lower bound on `w(A)` from sampling: 2000 random unit vectors, then
/// stochastic hill-climbing with shrinking steps from the five best and from
/// every `SPREAD_STRIDE`-th start. Every value is `|⟨Ax, x⟩|` for an actual
/// unit `x`, so the bound never exceeds the true radius.
pub fn sampled_radius(a: &ComplexMatrix, r: &mut Stream) -> Result<f64> {
    let n = a.dim();
    let f = |x: &[Complex64]| inner(&a.mul_vec(x), x).norm();
    let mut starts: Vec<(f64, Vec<Complex64>)> =
        (0..2000).map(|_| random_unit_vector(n, r).map(|x| (f(&x), x))).collect::<Result<Vec<_>>>()?;
    let spread: Vec<_> = starts.iter().step_by(SPREAD_STRIDE).cloned().collect();
    starts.sort_by(|p, q| q.0.total_cmp(&p.0));
    let mut best = starts[0].0;
    for (mut fx, mut x) in starts.into_iter().take(5).chain(spread) {
        let mut step = 0.5;
        let mut rounds = 0;
        while step > 1e-5 && rounds < 2000 {
            rounds += 1;
            let mut improved = false;
            for _ in 0..40 {
                let y: Vec<Complex64> = x.iter().map(|v| v + complex_gaussian(r) * step).collect();
                let Some(y) = normalized(&y) else { continue };
                let fy = f(&y);
                if fy > fx {
                    fx = fy;
                    x = y;
                    improved = true;
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        best = best.max(fx);
    }
    Ok(best)
}

fn sweep_vs_sampling(seed: u64) -> Result<CriterionReport> {
    tally_items(9, 100, |i| {
        let n = 2 + (i % 5) as usize;
        let mut r = rng(seed, 9, i);
        let a = gaussian_matrix(n, &mut r)?;
        let sweep = swept_radius(&a)?;
        let sampled = sampled_radius(&a, &mut r)?;
        let gap = sweep - sampled;
        let mut item = Item::default();
        item.max("sweep_minus_sampled", gap)
            .min("sweep_minus_sampled_min", gap)
            .require((0.0..=1e-3).contains(&gap), || format!("matrix {i} (n={n}): sweep {sweep}, sampled {sampled}"));
        Ok(item)
    })
}
