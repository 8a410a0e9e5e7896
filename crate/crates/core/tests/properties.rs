use commrange_core::maps::{check_preservation, random_d_member, Dagger, MapSpec, Mode, ShiftRule, SignRule};
use commrange_core::matcore::{
    commutator, hermitian_eigen, random_hermitian, random_unitary, ComplexMatrix, HermitianMatrix, Stream,
};
use commrange_core::nrange::{commutator_interval, interval_distance, interval_symmetric, SYMMETRY_TOL};
use commrange_core::pauli2::{from_pauli, to_pauli, unitary_to_rotation, PauliVector};
use proptest::prelude::*;

fn pair(n: usize, seed: u64) -> (HermitianMatrix, HermitianMatrix) {
    let mut rng = Stream::new(seed);
    (random_hermitian(n, &mut rng).unwrap(), random_hermitian(n, &mut rng).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigen_residual_is_small(n in 1usize..=16, seed in any::<u64>()) {
        let a = random_hermitian(n, &mut Stream::new(seed)).unwrap();
        let e = hermitian_eigen(&a).unwrap();
        prop_assert!(e.residual(&a) <= 1e-10 * a.max_abs().max(1.0));
        prop_assert!(e.orthonormality_defect() <= 1e-10);
    }

    #[test]
    fn commutator_is_traceless_skew(n in 2usize..=8, seed in any::<u64>()) {
        let (a, b) = pair(n, seed);
        let c = commutator(&a, &b).unwrap();
        prop_assert!(c.skew_deviation() <= 1e-12 * c.max_abs().max(1.0));
        prop_assert!(c.trace().norm() <= 1e-12 * c.max_abs().max(1.0) * n as f64);
        let iv = commutator_interval(&a, &b).unwrap();
        prop_assert!(iv.t_min <= 1e-12 && iv.t_max >= -1e-12);
    }

    #[test]
    fn transpose_reflects_the_range(n in 2usize..=6, seed in any::<u64>()) {
        let (a, b) = pair(n, seed);
        let iv = commutator_interval(&a, &b).unwrap();
        let ivt = commutator_interval(&a.transpose(), &b.transpose()).unwrap();
        prop_assert!(interval_distance(&ivt, &iv.reflected()) <= 1e-10);
    }

    #[test]
    fn unitary_conjugation_keeps_the_range(n in 2usize..=6, seed in any::<u64>()) {
        let (a, b) = pair(n, seed);
        let u = random_unitary(n, &mut Stream::substream(seed, 1)).unwrap();
        let iv = commutator_interval(&a, &b).unwrap();
        let ivu = commutator_interval(&a.conjugate_by(&u).unwrap(), &b.conjugate_by(&u).unwrap()).unwrap();
        prop_assert!(interval_distance(&iv, &ivu) <= 1e-10);
    }

    #[test]
    fn d_members_give_symmetric_ranges(n in 2usize..=6, seed in any::<u64>()) {
        let mut rng = Stream::new(seed);
        let a = random_d_member(n, &mut rng).unwrap();
        let b = random_hermitian(n, &mut rng).unwrap();
        prop_assert!(interval_symmetric(&commutator_interval(&a, &b).unwrap(), SYMMETRY_TOL));
    }

    #[test]
    fn pauli_round_trip(a in prop::array::uniform3(-5.0f64..5.0), t in -5.0f64..5.0) {
        let v = PauliVector { a, t };
        let back = to_pauli(&from_pauli(&v)).unwrap();
        for (got, want) in back.a.iter().zip(&a) {
            prop_assert!((got - want).abs() <= 1e-14 * 5.0);
        }
        prop_assert!((back.t - t).abs() <= 1e-14 * 5.0);
    }

    #[test]
    fn rotation_is_special_orthogonal(seed in any::<u64>()) {
        let t = unitary_to_rotation(&random_unitary(2, &mut Stream::new(seed)).unwrap()).unwrap();
        prop_assert!(t.orthogonality_defect() <= 1e-10);
        prop_assert!((t.det - 1.0).abs() <= 1e-10);
    }
}

#[test]
fn range_pass_implies_radius_pass() {
    let mut rng = Stream::new(21);
    for dagger in [Dagger::Identity, Dagger::Transpose] {
        let mut m = MapSpec::with_unitary(random_unitary(3, &mut rng).unwrap());
        m.dagger = dagger;
        let range = check_preservation(&m, Mode::Range, 200, 5, 1e-9).unwrap();
        let radius = check_preservation(&m, Mode::Radius, 200, 5, 1e-9).unwrap();
        assert!(radius.passed());
        assert_eq!(range.passed(), dagger == Dagger::Identity);
    }
}

#[test]
fn two_by_two_modes_agree() {
    let mut rng = Stream::new(22);
    let mut m = MapSpec::with_unitary(random_unitary(2, &mut rng).unwrap());
    m.sign_rule = SignRule::Hash { seed: 1 };
    m.shift_rule = ShiftRule::Hash { seed: 2, scale: 3.0 };
    m.dagger = Dagger::Transpose;
    for mode in [Mode::Spectrum, Mode::Range, Mode::Radius] {
        let r = check_preservation(&m, mode, 300, 8, 1e-10).unwrap();
        assert!(r.passed(), "{mode:?}: {}", r.max_violation);
    }
}

#[test]
fn matrix_json_shape() {
    let m = ComplexMatrix::from_fn(2, |i, j| commrange_core::Complex64::new(i as f64, j as f64));
    let v = serde_json::to_value(&m).unwrap();
    assert_eq!(v["dim"], 2);
    assert_eq!(v["re"], serde_json::json!([[0.0, 0.0], [1.0, 1.0]]));
    assert_eq!(v["im"], serde_json::json!([[0.0, 1.0], [0.0, 1.0]]));
    assert_eq!(serde_json::from_value::<ComplexMatrix>(v).unwrap(), m);
    let bad = serde_json::json!({"dim": 2, "re": [[1.0, 2.0], [0.0, 1.0]], "im": [[0.0, 0.0], [0.0, 0.0]]});
    assert!(serde_json::from_value::<HermitianMatrix>(bad).is_err());
}

#[test]
fn pauli_json_shape() {
    let v = serde_json::to_value(PauliVector { a: [1.0, 0.0, 0.0], t: 0.0 }).unwrap();
    assert_eq!(v, serde_json::json!({"a": [1.0, 0.0, 0.0], "t": 0.0}));
}
