mod common;

use common::*;
use proptest::prelude::*;
use sagnac::hilbert::{expectation, PauliString};
use sagnac::states::*;
use sagnac::witness::{structural_witness, structural_witness_observable};
use sagnac::{DensityMatrix, QubitAddress, Register};

fn to_vec(s: &sagnac::StateVectorF64) -> Vector {
    s.amplitudes().to_vec()
}

#[test]
fn circuit_output_is_phased_dicke() {
    let out = generate_phased_dicke_via_circuit::<f64>();
    assert!((out.fidelity(&phased_dicke()).unwrap() - 1.0).abs() < 1e-12);
    // independent gate-by-gate product
    let oracle_out = matvec(&reference_circuit(true), &xi_ref());
    assert!((overlap(&oracle_out, &phased_dicke_ref()) - 1.0).abs() < 1e-12);
    for (a, b) in out.amplitudes().iter().zip(&oracle_out) {
        assert!((a - b).norm() < 1e-12);
    }
}

#[test]
fn circuit_unitary_matches_gate_product() {
    for comp in [true, false] {
        let u = dicke_circuit_unitary::<f64>(comp).unwrap();
        let m: Mat = (0..16)
            .map(|i| (0..16).map(|j| u.get(i, j)).collect())
            .collect();
        assert!(max_diff(&m, &reference_circuit(comp)) < 1e-12);
        assert!(u.unitarity_deviation() < 1e-12);
    }
}

#[test]
fn compensation_plates_are_needed() {
    let u = dicke_circuit_unitary::<f64>(false).unwrap();
    let out = xi_state::<f64>().evolve(&u).unwrap();
    let f = out.fidelity(&phased_dicke()).unwrap();
    let oracle = overlap(
        &matvec(&reference_circuit(false), &xi_ref()),
        &phased_dicke_ref(),
    );
    assert!((f - oracle).abs() < 1e-12);
    assert!(f < 1.0 - 1e-3);
}

#[test]
fn inverse_circuit_recovers_xi() {
    let u = dicke_circuit_unitary::<f64>(true).unwrap();
    let back = phased_dicke::<f64>().evolve(&u.adjoint()).unwrap();
    assert!((back.fidelity(&xi_state()).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn z1z3_dressing_gives_symmetric_dicke() {
    let d = dicke_states::<f64>();
    let z13 = "Z1Z1".parse::<PauliString>().unwrap().to_operator::<f64>();
    let dressed = d.phased.evolve(&z13).unwrap();
    assert!((dressed.fidelity(&d.symmetric).unwrap() - 1.0).abs() < 1e-12);
    assert!(
        (overlap(
            &matvec(&string_op("Z1Z1"), &phased_dicke_ref()),
            &symmetric_dicke_ref()
        ) - 1.0)
            .abs()
            < 1e-12
    );
}

#[test]
fn dicke_definitions_match_oracle() {
    let d = dicke_states::<f64>();
    for (a, b) in d.phased.amplitudes().iter().zip(&phased_dicke_ref()) {
        assert!((a - b).norm() < 1e-15);
    }
    for (a, b) in d.symmetric.amplitudes().iter().zip(&symmetric_dicke_ref()) {
        assert!((a - b).norm() < 1e-15);
    }
    let zzzz = expectation(&"ZZZZ".parse::<PauliString>().unwrap().into(), &d.phased).unwrap();
    assert!((zzzz - 1.0).abs() < 1e-12);
}

#[test]
fn he_polarization_pair_is_bell_state() {
    let s = he_state(PhaseParams::new(0.7f64, 2.0));
    let rho = DensityMatrix::from_pure(&s)
        .partial_trace(&[QubitAddress::A_POL, QubitAddress::B_POL])
        .unwrap();
    let bell = polarization_pair(0.7);
    assert!((rho.fidelity(&bell).unwrap() - 1.0).abs() < 1e-12);
    assert!((rho.purity() - 1.0).abs() < 1e-12);
}

proptest! {
    #[test]
    fn factories_are_normalized(g in -10.0f64..10.0, d in -10.0f64..10.0) {
        let p = PhaseParams::new(g, d);
        prop_assert!(p.gamma() >= 0.0 && p.gamma() < std::f64::consts::TAU);
        prop_assert!((he_state(p).norm_sqr() - 1.0).abs() < 1e-12);
    }

    /// Schmidt ranks of the hyperentangled state: polarization | momentum is
    /// a product split, photon A | photon B holds both Bell pairs.
    #[test]
    fn he_schmidt_ranks(g in 0.0f64..6.28, d in 0.0f64..6.28) {
        let v = to_vec(&he_state(PhaseParams::new(g, d)));
        // slots: 0 A.path, 1 A.pol, 2 B.path, 3 B.pol
        prop_assert_eq!(rank(schmidt_matrix(&v, 4, &[1, 3]), 1e-9), 1);
        prop_assert_eq!(rank(schmidt_matrix(&v, 4, &[0, 1]), 1e-9), 4);
        prop_assert_eq!(rank(schmidt_matrix(&v, 4, &[0]), 1e-9), 2);
        prop_assert_eq!(rank(schmidt_matrix(&v, 4, &[1]), 1e-9), 2);
    }

    /// Any linear witness is affine in the white-noise weight.
    #[test]
    fn white_noise_is_affine(ps in prop::collection::vec(0.0f64..1.0, 5)) {
        let d = phased_dicke::<f64>();
        let obs = structural_witness_observable::<f64>().unwrap();
        let w = |p: f64| expectation(&obs, &add_white_noise(&d, p).unwrap()).unwrap();
        let (w0, w1) = (w(0.0), w(1.0));
        for p in ps {
            prop_assert!((w(p) - (w0 + (w1 - w0) * p)).abs() < 1e-12);
        }
    }
}

#[test]
fn calibrated_noise_reproduces_measured_witness() {
    let rho = add_white_noise(&phased_dicke::<f64>(), 0.1708).unwrap();
    let w = structural_witness(&rho).unwrap().value;
    assert!((w - (1.0 - 5.0 / 3.0 * (1.0 - 0.1708))).abs() < 1e-12);
    assert!((w - (-0.382)).abs() < 5e-4);
}

#[test]
fn xi_from_source_optics() {
    let a = xi_state_via_source::<f64>().unwrap();
    assert!((overlap(&to_vec(&a), &xi_ref()) - 1.0).abs() < 1e-12);
}

#[test]
fn dephasing_keeps_populations() {
    let rho = DensityMatrix::from_pure(&phased_dicke::<f64>());
    let all = Register::dicke().qubits().to_vec();
    let out = add_dephasing(&rho, 1.0, &all).unwrap();
    for i in 0..16 {
        for j in 0..16 {
            let e = if i == j { rho.get(i, i) } else { z(0.0, 0.0) };
            assert!((out.get(i, j) - e).norm() < 1e-12);
        }
    }
}
