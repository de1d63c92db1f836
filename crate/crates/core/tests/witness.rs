mod common;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use sagnac::hilbert::{expectation, Pauli, QuantumState};
use sagnac::states::{add_white_noise, dicke_states, phased_dicke};
use sagnac::witness::*;
use sagnac::{DensityMatrix, Register, StateVector};

const PAIR_LABELS: [(usize, usize); 6] = [(1, 4), (2, 4), (3, 4), (1, 2), (1, 3), (2, 3)];

fn label(axis: char, i: usize, j: usize) -> String {
    (1..=4)
        .map(|q| if q == i || q == j { axis } else { '1' })
        .collect()
}

/// `Σ_{i<j} e^{ik(i−j)} σ^a_i σ^a_j` assembled from explicit matrices.
fn oracle_structure(axis: char, k: f64) -> Mat {
    let mut m = zeros(16);
    for i in 1..=4 {
        for j in i + 1..=4 {
            let ph = Complex64::from_polar(1.0, k * (i as f64 - j as f64));
            m = add(&m, &scale(&string_op(&label(axis, i, j)), ph));
        }
    }
    m
}

fn oracle_wmult() -> Mat {
    let id = eye(16);
    let mut total = scale(&id, z(2.0, 0.0));
    for (axis, k, w2, w4) in [
        ('X', std::f64::consts::PI, 1.0 / 6.0, -1.0 / 6.0),
        ('Y', std::f64::consts::PI, 1.0 / 6.0, -1.0 / 6.0),
        ('Z', 0.0, 31.0 / 12.0, -7.0 / 12.0),
    ] {
        let s = oracle_structure(axis, k);
        let j2 = add(&id, &scale(&s, z(0.5, 0.0)));
        let j4 = add(&add(&id, &s), &scale(&mul(&s, &s), z(0.25, 0.0)));
        total = add(
            &total,
            &add(&scale(&j2, z(w2, 0.0)), &scale(&j4, z(w4, 0.0))),
        );
    }
    total
}

fn random_state() -> impl Strategy<Value = StateVector<f64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 16)
        .prop_filter("non-zero", |v| {
            v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-3
        })
        .prop_map(|v| {
            StateVector::normalized(
                Register::dicke(),
                v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect(),
            )
            .unwrap()
        })
}

#[test]
fn ideal_structure_factors() {
    let d = phased_dicke::<f64>();
    let v = phased_dicke_ref();
    let pi = std::f64::consts::PI;
    for (axis, p, k, expected) in [
        ('X', Pauli::X, pi, 4.0),
        ('Y', Pauli::Y, pi, 4.0),
        ('Z', Pauli::Z, 0.0, -2.0),
    ] {
        let lib = structure_factor(&StructureFactorSpec::new(p, p, k), &d).unwrap();
        let oracle = expect(&oracle_structure(axis, k), &v);
        assert!((lib - oracle.re).abs() < 1e-12);
        assert!((lib - expected).abs() < 1e-12, "{axis}: {lib}");
    }
}

#[test]
fn normalized_flag_divides_by_pair_count() {
    let d = phased_dicke::<f64>();
    let spec = StructureFactorSpec::new(Pauli::Z, Pauli::Z, 0.0);
    let raw = structure_factor(&spec, &d).unwrap();
    let norm = structure_factor(&spec.clone().normalized(true), &d).unwrap();
    assert!((norm - raw / 6.0).abs() < 1e-15);
}

#[test]
fn ideal_pair_table() {
    let t = correlation_table::<f64, _>(&phased_dicke::<f64>()).unwrap();
    let v = phased_dicke_ref();
    let signs = [-1.0, 1.0, -1.0, -1.0, 1.0, -1.0];
    for (axis, expected) in [('X', Some(2.0 / 3.0)), ('Y', Some(2.0 / 3.0)), ('Z', None)] {
        for (n, &(i, j)) in PAIR_LABELS.iter().enumerate() {
            let l = label(axis, i, j);
            let row = t.rows.iter().find(|r| r.qubits == l).unwrap();
            let oracle = expect(&string_op(&l), &v).re;
            assert!((row.value - oracle).abs() < 1e-12);
            match expected {
                Some(m) => assert!((row.value - signs[n] * m).abs() < 1e-12, "{l}"),
                None => assert!((row.value + 1.0 / 3.0).abs() < 1e-12),
            }
        }
    }
    let mixed = DensityMatrix::<f64>::maximally_mixed(Register::dicke());
    assert!(correlation_table::<f64, _>(&mixed)
        .unwrap()
        .rows
        .iter()
        .all(|r| r.value.abs() < 1e-15));
}

/// Conjugating by `Z₁Z₃` flips the sign of X/Y pair correlations that touch
/// exactly one of qubits 1 and 3.
#[test]
fn sign_pattern_follows_from_z1z3_dressing() {
    let d = dicke_states::<f64>();
    let sym = correlation_table::<f64, _>(&d.symmetric).unwrap();
    let ph = correlation_table::<f64, _>(&d.phased).unwrap();
    for (a, b) in sym.rows.iter().zip(&ph.rows) {
        let q: Vec<usize> = a
            .qubits
            .char_indices()
            .filter(|(_, ch)| *ch != '1')
            .map(|(i, _)| i + 1)
            .collect();
        let odd = q.iter().filter(|&&x| x == 1 || x == 3).count() == 1;
        let flip = if odd && a.operator != "ZZ" { -1.0 } else { 1.0 };
        assert!((b.value - flip * a.value).abs() < 1e-12, "{}", a.qubits);
    }
}

#[test]
fn witness_operators_are_hermitian() {
    let w = structural_witness_observable::<f64>()
        .unwrap()
        .to_operator();
    assert!(w.hermitian_deviation() < 1e-12);
    let m = wmult_operator::<f64>().unwrap();
    assert!(m.hermitian_deviation() < 1e-12);
    let lib: Mat = (0..16)
        .map(|i| (0..16).map(|j| m.get(i, j)).collect())
        .collect();
    assert!(max_diff(&lib, &oracle_wmult()) < 1e-12);
}

#[test]
fn noise_threshold_is_two_fifths() {
    let d = phased_dicke::<f64>();
    let w = |p: f64| {
        structural_witness(&add_white_noise(&d, p).unwrap())
            .unwrap()
            .value
    };
    for p in [0.0, 0.1, 0.25, 0.4, 0.9] {
        assert!((w(p) - (1.0 - 5.0 / 3.0 * (1.0 - p))).abs() < 1e-12);
    }
    assert!(w(0.4).abs() < 1e-12);
    assert!(w(0.39) < 0.0 && w(0.41) > 0.0);
}

#[test]
fn measured_structural_witness() {
    let r = structural_witness_from_table(&measured_pair_table::<f64>()).unwrap();
    assert!((r.value - (-0.382)).abs() < 1e-3, "{}", r.value);
    // quadrature of the 18 row uncertainties, each weighted by 1/6
    let table = measured_pair_table::<f64>();
    let expected_sigma = table
        .rows
        .iter()
        .map(|row| row.sigma * row.sigma)
        .sum::<f64>()
        .sqrt()
        / 6.0;
    assert!(
        (r.sigma - expected_sigma).abs() < 1e-12,
        "{} vs {}",
        r.sigma,
        expected_sigma
    );
    assert!((0.010..0.014).contains(&r.sigma));
    let (sxx, _) =
        structure_factor_from_table(Pauli::X, std::f64::consts::PI, &measured_pair_table())
            .unwrap();
    assert!((sxx - 3.135).abs() < 1e-12);
}

#[test]
fn wmult_forms_on_ideal_state() {
    let d = phased_dicke::<f64>();
    let collective = wmult(&d, WitnessForm::Collective).unwrap();
    assert!((collective.value - (-1.0)).abs() < 1e-10);
    let expanded = wmult(&d, WitnessForm::Expanded).unwrap();
    assert!((expanded.value - (-3.375)).abs() < 1e-10);
    let oracle = expect(&oracle_wmult(), &phased_dicke_ref()).re;
    assert!((collective.value - oracle).abs() < 1e-12);
    let j: Vec<f64> = collective.terms.iter().map(|t| t.correlation).collect();
    for (got, want) in j.iter().zip([3.0, 3.0, 0.0, 12.0, 12.0, 0.0]) {
        assert!((got - want).abs() < 1e-10);
    }
}

#[test]
fn wmult_from_measured_tables() {
    let pairs = measured_pair_table::<f64>();
    let four = measured_four_body_table::<f64>();
    let collective = wmult_from_tables(&pairs, Some(&four), WitnessForm::Collective).unwrap();
    let expanded = wmult_from_tables(&pairs, Some(&four), WitnessForm::Expanded).unwrap();
    // the two forms differ only in the constant term
    assert!((collective.value - expanded.value - 19.0 / 8.0).abs() < 1e-12);
    assert!(
        (expanded.value - (-2.716)).abs() < 1e-3,
        "{}",
        expanded.value
    );
    assert!(
        (collective.value - (-0.341)).abs() < 1e-3,
        "{}",
        collective.value
    );
    assert!(collective.entangled && expanded.entangled);
}

proptest! {
    #[test]
    fn unphased_structure_factor_is_plain_pair_sum(s in random_state(), axis in prop::sample::select(vec!['X', 'Y', 'Z'])) {
        let p = Pauli::from_symbol(axis).unwrap();
        let lib = structure_factor(&StructureFactorSpec::new(p, p, 0.0), &s).unwrap();
        let v = s.amplitudes().to_vec();
        let plain: f64 = (1..=4)
            .flat_map(|i| (i + 1..=4).map(move |j| (i, j)))
            .map(|(i, j)| expect(&string_op(&label(axis, i, j)), &v).re)
            .sum();
        prop_assert!((lib - plain).abs() < 1e-12);
    }

    #[test]
    fn complex_structure_factor_matches_oracle(s in random_state(), k in -4.0f64..4.0) {
        let spec = StructureFactorSpec::new(Pauli::X, Pauli::X, k);
        let lib = sagnac::hilbert::expectation_complex(&spec.observable().unwrap(), &s).unwrap();
        let oracle = expect(&oracle_structure('X', k), &s.amplitudes().to_vec());
        prop_assert!((lib - oracle).norm() < 1e-12);
    }

    #[test]
    fn table_round_trip(s in random_state()) {
        let direct = structural_witness(&s).unwrap();
        let via_table = structural_witness_from_table(&correlation_table::<f64, _>(&s).unwrap()).unwrap();
        let via_operator = expectation(&structural_witness_observable().unwrap(), &s).unwrap();
        prop_assert!((direct.value - via_table.value).abs() < 1e-12);
        prop_assert!((direct.value - via_operator).abs() < 1e-12);
        prop_assert!((direct.value - direct.reassembled()).abs() < 1e-12);
    }

    /// The collective operator equals its pair/four-body expansion with
    /// constant 21/8 on every state.
    #[test]
    fn collective_expansion_identity(s in random_state()) {
        let op = wmult(&s, WitnessForm::Collective).unwrap().value;
        let pairs = correlation_table::<f64, _>(&s).unwrap();
        let four = four_body_table::<f64, _>(&s).unwrap();
        let table = wmult_from_tables(&pairs, Some(&four), WitnessForm::Collective).unwrap().value;
        prop_assert!((op - table).abs() < 1e-12);
        let oracle = expect(&oracle_wmult(), &s.amplitudes().to_vec()).re;
        prop_assert!((op - oracle).abs() < 1e-12);
        prop_assert!(s.operator_expectation(&wmult_operator().unwrap()).unwrap().im.abs() < 1e-12);
    }
}

#[test]
fn predicted_shot_noise() {
    let t = correlation_table::<f64, _>(&phased_dicke::<f64>())
        .unwrap()
        .with_shot_noise(10_000)
        .unwrap();
    for r in &t.rows {
        assert!((r.sigma - ((1.0 - r.value * r.value) / 1e4).sqrt()).abs() < 1e-15);
    }
    let noisy = add_white_noise(&phased_dicke::<f64>(), 0.1708).unwrap();
    let exact = structural_witness_from_table(
        &correlation_table::<f64, _>(&noisy)
            .unwrap()
            .with_shot_noise(10_000)
            .unwrap(),
    )
    .unwrap();
    let sampled =
        structural_witness_from_table(&sampled_correlation_table(&noisy, 10_000, 42).unwrap())
            .unwrap();
    assert!((exact.sigma - sampled.sigma).abs() < 0.1 * exact.sigma);
    assert!((sampled.value - exact.value).abs() < 3.0 * exact.sigma);
    assert!(correlation_table::<f64, _>(&noisy)
        .unwrap()
        .with_shot_noise(0)
        .is_err());
}
