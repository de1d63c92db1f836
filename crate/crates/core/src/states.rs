//! Ideal state factories and the optical pipeline that turns `|ξ⟩` into the
//! phased Dicke state.
//!
//! All 4-qubit states live on [`Register::dicke`]: qubit 1 = A.path,
//! 2 = A.pol, 3 = B.path, 4 = B.pol.

use crate::elements::{project_out, propagate, OpticalElement};
use crate::error::{Error, Result};
use crate::hilbert::{tensor, DensityMatrix, Operator, Pauli, QubitAddress, Register, StateVector};
use crate::scalar::{cis, re, wrap_angle, Real, C};

/// Relative phases of the hyperentangled source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseParams<T> {
    gamma: T,
    delta: T,
}

impl<T: Real> PhaseParams<T> {
    pub fn new(gamma: T, delta: T) -> Self {
        PhaseParams {
            gamma: wrap_angle(gamma),
            delta: wrap_angle(delta),
        }
    }

    /// Polarization phase between `|HH⟩` and `|VV⟩`.
    pub fn gamma(&self) -> T {
        self.gamma
    }

    /// Momentum phase between `|rℓ⟩` and `|ℓr⟩`.
    pub fn delta(&self) -> T {
        self.delta
    }
}

impl<T: Real> Default for PhaseParams<T> {
    fn default() -> Self {
        PhaseParams::new(T::zero(), T::zero())
    }
}

fn pair<T: Real>(
    a: QubitAddress,
    b: QubitAddress,
    first: &str,
    second: &str,
    phase: T,
) -> StateVector<T> {
    let reg = Register::new(vec![a, b]).expect("distinct qubits");
    StateVector::superposition(reg, &[(re(T::one()), first), (cis(phase), second)])
        .expect("non-zero")
}

/// `(|HH⟩ + e^{iγ}|VV⟩)/√2` on (A.pol, B.pol).
pub fn polarization_pair<T: Real>(gamma: T) -> StateVector<T> {
    pair(QubitAddress::A_POL, QubitAddress::B_POL, "00", "11", gamma)
}

/// `(|rℓ⟩ + e^{iδ}|ℓr⟩)/√2` on (A.path, B.path).
pub fn momentum_pair<T: Real>(delta: T) -> StateVector<T> {
    pair(
        QubitAddress::A_PATH,
        QubitAddress::B_PATH,
        "01",
        "10",
        delta,
    )
}

/// Polarization–momentum hyperentangled state
/// `½(|HH⟩ + e^{iγ}|VV⟩) ⊗ (|rℓ⟩ + e^{iδ}|ℓr⟩)` on the Dicke register.
pub fn he_state<T: Real>(p: PhaseParams<T>) -> StateVector<T> {
    tensor(&[polarization_pair(p.gamma), momentum_pair(p.delta)])
        .and_then(|s| s.reorder(&Register::dicke()))
        .expect("disjoint pairs")
}

/// `(|0010⟩ − |1000⟩ + 2|0111⟩)/√6`.
pub fn xi_state<T: Real>() -> StateVector<T> {
    let one = re(T::one());
    StateVector::superposition(
        Register::dicke(),
        &[(one, "0010"), (-one, "1000"), (one + one, "0111")],
    )
    .expect("non-zero")
}

/// `|ξ⟩` assembled from the two source contributions: `|HH⟩(|rℓ⟩ − |ℓr⟩)`
/// and a `|VV⟩(|rℓ⟩ + |ℓr⟩)` emission whose `ℓr` modes are blocked, mixed
/// with the `1 : 2` amplitude weight of the `|VV⟩|rℓ⟩` term.
pub fn xi_state_via_source<T: Real>() -> Result<StateVector<T>> {
    let hh = tensor(&[polarization_pair_term(false), momentum_pair(T::PI())])?
        .reorder(&Register::dicke())?;
    let vv_full = tensor(&[polarization_pair_term(true), momentum_pair(T::zero())])?
        .reorder(&Register::dicke())?;
    // blocking photon A's ℓ mode removes the ℓr term
    let (vv, _) = project_out(QubitAddress::A_PATH, 1, &vv_full)?;
    let w_hh = re(T::of(2.0).sqrt());
    let w_vv = re(T::of(2.0));
    let amps: Vec<C<T>> = hh
        .amplitudes()
        .iter()
        .zip(vv.amplitudes())
        .map(|(&a, &b)| a * w_hh + b * w_vv)
        .collect();
    StateVector::normalized(Register::dicke(), amps)
}

fn polarization_pair_term<T: Real>(vertical: bool) -> StateVector<T> {
    let reg = Register::new(vec![QubitAddress::A_POL, QubitAddress::B_POL]).expect("distinct");
    StateVector::from_bits(reg, if vertical { "11" } else { "00" }).expect("valid bits")
}

const DICKE_KETS: [(&str, i8); 6] = [
    ("0011", 1),
    ("1100", 1),
    ("0110", 1),
    ("1001", 1),
    ("0101", -1),
    ("1010", -1),
];

#[derive(Debug, Clone, PartialEq)]
pub struct DickeStates<T> {
    /// Uniform superposition of the six two-excitation kets.
    pub symmetric: StateVector<T>,
    /// Same kets with `−` on `|0101⟩` and `|1010⟩`.
    pub phased: StateVector<T>,
}

pub fn dicke_states<T: Real>() -> DickeStates<T> {
    let build = |signed: bool| {
        let terms: Vec<(C<T>, &str)> = DICKE_KETS
            .iter()
            .map(|&(k, s)| (re(if signed && s < 0 { -T::one() } else { T::one() }), k))
            .collect();
        StateVector::superposition(Register::dicke(), &terms).expect("non-zero")
    };
    DickeStates {
        symmetric: build(false),
        phased: build(true),
    }
}

pub fn phased_dicke<T: Real>() -> StateVector<T> {
    dicke_states().phased
}

/// Element list realising `Z₄ CZ̄₁₂ CZ̄₃₄ CX₁₂ CX₃₄ H₁ H₃`, in order of passage.
///
/// One beam splitter gives both Hadamards; a 45° half-wave plate in each
/// `ℓ` mode gives the CX gates; a 0° plate in each `r` mode gives the
/// compensating CZ̄ gates; a final 0° plate on photon B gives `Z₄`.
pub fn dicke_circuit<T: Real>(with_compensation: bool) -> Vec<OpticalElement<T>> {
    let q45 = T::FRAC_PI_4();
    let mut v = vec![
        OpticalElement::bs(QubitAddress::A_PATH),
        OpticalElement::bs(QubitAddress::B_PATH),
        OpticalElement::hwp(q45, QubitAddress::B_POL).when(QubitAddress::B_PATH, 1),
        OpticalElement::hwp(q45, QubitAddress::A_POL).when(QubitAddress::A_PATH, 1),
    ];
    if with_compensation {
        v.push(OpticalElement::hwp(T::zero(), QubitAddress::B_POL).when(QubitAddress::B_PATH, 0));
        v.push(OpticalElement::hwp(T::zero(), QubitAddress::A_POL).when(QubitAddress::A_PATH, 0));
    }
    v.push(OpticalElement::hwp(T::zero(), QubitAddress::B_POL));
    v
}

/// Runs `|ξ⟩` through [`dicke_circuit`].
pub fn generate_phased_dicke_via_circuit<T: Real>() -> StateVector<T> {
    propagate(&dicke_circuit(true), &xi_state())
        .expect("pipeline is unitary")
        .0
}

/// The whole pipeline as one 16×16 matrix.
pub fn dicke_circuit_unitary<T: Real>(with_compensation: bool) -> Result<Operator<T>> {
    let reg = Register::dicke();
    let mut cols: Vec<Vec<C<T>>> = Vec::with_capacity(16);
    for i in 0..16 {
        let (out, _) = propagate(
            &dicke_circuit(with_compensation),
            &StateVector::basis(reg.clone(), i)?,
        )?;
        cols.push(out.amplitudes().to_vec());
    }
    Ok(Operator::from_fn(16, |r, c| cols[c][r]))
}

fn check_probability<T: Real>(p: T) -> Result<()> {
    if !(p >= T::zero() && p <= T::one()) {
        return Err(Error::OutOfRange {
            name: "noise p",
            value: p.as_f64(),
            range: "[0, 1]",
        });
    }
    Ok(())
}

/// `ρ = p·I/2ⁿ + (1 − p)|ψ⟩⟨ψ|`.
pub fn add_white_noise<T: Real>(state: &StateVector<T>, p: T) -> Result<DensityMatrix<T>> {
    white_noise(&DensityMatrix::from_pure(state), p)
}

pub fn white_noise<T: Real>(rho: &DensityMatrix<T>, p: T) -> Result<DensityMatrix<T>> {
    check_probability(p)?;
    DensityMatrix::maximally_mixed(rho.register().clone()).mix(rho, p)
}

/// Independent dephasing `ρ → (1 − p/2)ρ + (p/2)ZρZ` on each listed qubit;
/// `p = 1` removes all coherence on those qubits.
pub fn add_dephasing<T: Real>(
    rho: &DensityMatrix<T>,
    p: T,
    qubits: &[QubitAddress],
) -> Result<DensityMatrix<T>> {
    check_probability(p)?;
    let z = Pauli::Z.matrix();
    let half = p / T::of(2.0);
    qubits.iter().try_fold(rho.clone(), |acc, &q| {
        let flipped = acc.conjugate(&z, &[q])?;
        acc.mix(&flipped, T::one() - half)
    })
}

/// Named factory used by the command line: `he`, `xi`, `dicke`, `phased-dicke`.
pub fn named_state<T: Real>(name: &str, phases: PhaseParams<T>) -> Result<StateVector<T>> {
    match name {
        "he" => Ok(he_state(phases)),
        "xi" => Ok(xi_state()),
        "dicke" => Ok(dicke_states().symmetric),
        "phased-dicke" => Ok(dicke_states().phased),
        other => Err(Error::Parse(format!(
            "unknown state `{other}` (expected he, xi, dicke, phased-dicke)"
        ))),
    }
}

/// Single-qubit targets: `zero`, `one`, `plus`, `minus`, `plus-i`, `minus-i`.
pub fn named_qubit_state<T: Real>(name: &str, on: QubitAddress) -> Result<StateVector<T>> {
    let reg = Register::single(on);
    let o = re(T::one());
    let i = C::new(T::zero(), T::one());
    let terms: [(C<T>, &str); 2] = match name {
        "zero" | "0" => return StateVector::from_bits(reg, "0"),
        "one" | "1" => return StateVector::from_bits(reg, "1"),
        "plus" | "+" => [(o, "0"), (o, "1")],
        "minus" | "-" => [(o, "0"), (-o, "1")],
        "plus-i" | "+i" => [(o, "0"), (i, "1")],
        "minus-i" | "-i" => [(o, "0"), (-i, "1")],
        other => {
            return Err(Error::Parse(format!(
                "unknown single-qubit state `{other}`"
            )))
        }
    };
    StateVector::superposition(reg, &terms)
}
