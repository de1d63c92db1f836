//! Path-encoded C-Phase gate on a single photon in a displaced Sagnac loop.
//!
//! Register: control = B.path (`r`→0, `ℓ`→1, the mode before the loop
//! beam splitter), target = B.sagnac (clockwise→0, counterclockwise→1).
//! A glass plate in each control branch sets the phase picked up by the
//! counterclockwise mode.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::counts::{derive_seed, sample};
use crate::elements::{hadamard, phase_shift, propagate, OpticalElement};
use crate::error::{Error, Result};
use crate::hilbert::{DensityMatrix, Operator, QuantumState, QubitAddress, Register, StateVector};
use crate::scalar::{cis, re, wrap_angle, Real};
use crate::states::white_noise;

pub const CONTROL: QubitAddress = QubitAddress::B_PATH;
pub const TARGET: QubitAddress = QubitAddress::B_SAGNAC;

/// Spatial mode the photon enters in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PathMode {
    #[serde(rename = "r")]
    R,
    #[serde(rename = "l")]
    L,
}

impl PathMode {
    pub fn bit(self) -> u8 {
        match self {
            PathMode::R => 0,
            PathMode::L => 1,
        }
    }
}

/// Glass-plate phases and input mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SagnacConfig<T> {
    phi_r: T,
    phi_l: T,
    locked: bool,
    input: PathMode,
}

impl<T: Real> SagnacConfig<T> {
    /// Independent phases.
    pub fn new(phi_r: T, phi_l: T, input: PathMode) -> Self {
        SagnacConfig {
            phi_r: wrap_angle(phi_r),
            phi_l: wrap_angle(phi_l),
            locked: false,
            input,
        }
    }

    /// Phases tied by `φ_r = φ_ℓ + π`.
    pub fn locked(phi_l: T, input: PathMode) -> Self {
        SagnacConfig {
            phi_r: wrap_angle(phi_l + T::PI()),
            phi_l: wrap_angle(phi_l),
            locked: true,
            input,
        }
    }

    pub fn phi_r(&self) -> T {
        self.phi_r
    }

    pub fn phi_l(&self) -> T {
        self.phi_l
    }

    pub fn is_locked(&self) -> bool {
        self.locked
    }

    pub fn input(&self) -> PathMode {
        self.input
    }

    /// Glass-plate phase seen by control value `which`.
    pub fn phase_for(&self, which: u8) -> T {
        if which == 0 {
            self.phi_r
        } else {
            self.phi_l
        }
    }

    /// Element sequence: entrance splitter, first loop-splitter pass, then the
    /// two branch glass plates.
    pub fn elements(&self) -> Vec<OpticalElement<T>> {
        vec![
            OpticalElement::bs(CONTROL),
            OpticalElement::bs(TARGET),
            OpticalElement::glass(self.phi_r, TARGET).when(CONTROL, 0),
            OpticalElement::glass(self.phi_l, TARGET).when(CONTROL, 1),
        ]
    }
}

/// `diag(1, e^{iφ_r}, 1, e^{iφ_ℓ})` on (control, target).
pub fn cphase_unitary<T: Real>(phi_r: T, phi_l: T) -> Operator<T> {
    let one = re(T::one());
    Operator::diagonal(&[one, cis(phi_r), one, cis(phi_l)])
}

fn input_state<T: Real>(mode: PathMode) -> StateVector<T> {
    StateVector::basis(Register::cphase(), (mode.bit() as usize) << 1).expect("2-qubit basis state")
}

/// State after the glass plates, propagated through the optical elements.
pub fn sagnac_evolve<T: Real>(cfg: &SagnacConfig<T>) -> Result<StateVector<T>> {
    Ok(propagate(&cfg.elements(), &input_state(cfg.input))?.0)
}

/// Same state from the gate matrices: `cphase · (H ⊗ H) |input, 0⟩`.
pub fn sagnac_evolve_matrix<T: Real>(cfg: &SagnacConfig<T>) -> Result<StateVector<T>> {
    let h = hadamard::<T>();
    let u = &cphase_unitary(cfg.phi_r, cfg.phi_l) * &h.kron(&h);
    input_state(cfg.input).evolve(&u)
}

/// Conditional target state for control value `which`, with its probability.
pub fn project_control<T: Real>(state: &StateVector<T>, which: u8) -> Result<(StateVector<T>, T)> {
    if which > 1 {
        return Err(Error::OutOfRange {
            name: "control value",
            value: which as f64,
            range: "{0, 1}",
        });
    }
    let reg = state.register();
    let cbit = reg.bit(reg.position(CONTROL)?);
    let tbit = reg.bit(reg.position(TARGET)?);
    if reg.len() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            actual: reg.dim(),
        });
    }
    let pick = |t: usize| state.amplitudes()[((which as usize) << cbit) | (t << tbit)];
    let amps = vec![pick(0), pick(1)];
    let p: T = amps.iter().map(|a| a.norm_sqr()).sum();
    if p <= T::identity_tol() {
        return Err(Error::PostSelectionEmpty);
    }
    Ok((StateVector::normalized(Register::single(TARGET), amps)?, p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Probabilities of the `+1` and `−1` outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Outcomes<T> {
    pub plus: T,
    pub minus: T,
}

impl<T: Real> Outcomes<T> {
    pub fn expectation(&self) -> T {
        self.plus - self.minus
    }
}

/// Target Pauli measurement.
///
/// X and Y close the loop on the beam splitter and read the output port,
/// Y after a `−π/2` analysis phase on the counterclockwise mode. Z blocks
/// one loop direction, i.e. reads the computational basis.
pub fn measure_target_pauli<T: Real, S: QuantumState<T> + ?Sized>(
    state: &S,
    axis: Axis,
) -> Result<Outcomes<T>> {
    let mut rho = state.to_density();
    if axis == Axis::Y {
        rho = rho.conjugate(&phase_shift(wrap_angle(-T::FRAC_PI_2())), &[TARGET])?;
    }
    if axis != Axis::Z {
        rho = rho.conjugate(&hadamard(), &[TARGET])?;
    }
    let reg = rho.register().clone();
    let bit = reg.bit(reg.position(TARGET)?);
    let plus: T = rho
        .diagonal()
        .iter()
        .enumerate()
        .filter(|(i, _)| (i >> bit) & 1 == 0)
        .map(|(_, &v)| v)
        .sum();
    let plus = plus.max(T::zero()).min(T::one());
    Ok(Outcomes {
        plus,
        minus: T::one() - plus,
    })
}

/// One row of the truth table.
#[derive(Debug, Clone, PartialEq)]
pub struct TruthRow<T> {
    pub control: u8,
    pub phase: T,
    pub probability: T,
    pub target: StateVector<T>,
}

/// `(|0⟩ + e^{iφ}|1⟩)/√2` on the target.
pub fn phase_state<T: Real>(phi: T) -> StateVector<T> {
    StateVector::superposition(
        Register::single(TARGET),
        &[(re(T::one()), "0"), (cis(phi), "1")],
    )
    .expect("unit")
}

/// Conditional target states for both control values, entering in `r`.
pub fn truth_table<T: Real>(phi_r: T, phi_l: T) -> Result<Vec<TruthRow<T>>> {
    let cfg = SagnacConfig::new(phi_r, phi_l, PathMode::R);
    let out = sagnac_evolve(&cfg)?;
    (0..2u8)
        .map(|which| {
            let (target, probability) = project_control(&out, which)?;
            Ok(TruthRow {
                control: which,
                phase: cfg.phase_for(which),
                probability,
                target,
            })
        })
        .collect()
}

/// One scan point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FringePoint<T> {
    pub phi: T,
    pub probability: T,
    pub counts: u64,
    pub sigma: T,
}

/// Parameters of a fringe scan.
#[derive(Debug, Clone, PartialEq)]
pub struct FringeScan<T> {
    /// Control projection; its glass plate is the one varied.
    pub project: u8,
    pub phis: Vec<T>,
    pub shots: u64,
    pub seed: u64,
    /// White noise on the conditional target state.
    pub noise: T,
}

/// `steps` evenly spaced phases from `start` to `end` inclusive.
pub fn phase_grid<T: Real>(start: T, end: T, steps: usize) -> Vec<T> {
    match steps {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..steps)
            .map(|i| start + (end - start) * T::of(i as f64) / T::of((steps - 1) as f64))
            .collect(),
    }
}

/// Single counts at the bright port of the closed loop while one glass plate
/// is scanned with the phases locked.
///
/// Point `i` draws from its own stream `derive_seed(seed, i)`, so the result
/// is independent of thread scheduling.
pub fn fringe_scan<T: Real>(scan: &FringeScan<T>) -> Result<Vec<FringePoint<T>>> {
    if scan.shots == 0 {
        return Err(Error::ZeroShots);
    }
    if scan.project > 1 {
        return Err(Error::OutOfRange {
            name: "projection",
            value: scan.project as f64,
            range: "{0, 1}",
        });
    }
    if !(scan.noise >= T::zero() && scan.noise <= T::one()) {
        return Err(Error::OutOfRange {
            name: "noise p",
            value: scan.noise.as_f64(),
            range: "[0, 1]",
        });
    }
    scan.phis
        .par_iter()
        .enumerate()
        .map(|(i, &phi)| {
            let cfg = if scan.project == 0 {
                SagnacConfig::locked(phi - T::PI(), PathMode::R)
            } else {
                SagnacConfig::locked(phi, PathMode::R)
            };
            let (target, _) = project_control(&sagnac_evolve(&cfg)?, scan.project)?;
            let rho = white_noise(&DensityMatrix::from_pure(&target), scan.noise)?;
            let p = measure_target_pauli(&rho, Axis::X)?;
            let probs = [("+".to_string(), p.plus), ("-".to_string(), p.minus)].into();
            let rec = sample("X", &probs, scan.shots, derive_seed(scan.seed, i as u64))?;
            let n = rec.count("+");
            Ok(FringePoint {
                phi,
                probability: p.plus,
                counts: n,
                sigma: T::of(n as f64).sqrt(),
            })
        })
        .collect()
}

/// Least-squares fit of `a + b cos φ + c sin φ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FringeFit<T> {
    pub offset: T,
    pub amplitude: T,
    /// Phase of the maximum.
    pub phase: T,
    /// `amplitude / offset`.
    pub visibility: T,
}

pub fn fit_fringe<T: Real>(data: &[(T, T)]) -> Result<FringeFit<T>> {
    if data.len() < 3 {
        return Err(Error::OutOfRange {
            name: "fit points",
            value: data.len() as f64,
            range: ">= 3",
        });
    }
    let mut m = [[T::zero(); 3]; 3];
    let mut v = [T::zero(); 3];
    for &(phi, y) in data {
        let f = [T::one(), phi.cos(), phi.sin()];
        for r in 0..3 {
            v[r] += f[r] * y;
            for c in 0..3 {
                m[r][c] += f[r] * f[c];
            }
        }
    }
    let [a, b, c] = solve3(m, v).ok_or(Error::OutOfRange {
        name: "fit design",
        value: 0.0,
        range: "phases spanning a full period",
    })?;
    let amplitude = (b * b + c * c).sqrt();
    Ok(FringeFit {
        offset: a,
        amplitude,
        phase: wrap_angle(c.atan2(b)),
        visibility: amplitude / a,
    })
}

/// Visibility of a scan fitted on raw counts.
pub fn fit_visibility<T: Real>(points: &[FringePoint<T>]) -> Result<T> {
    let data: Vec<(T, T)> = points
        .iter()
        .map(|p| (p.phi, T::of(p.counts as f64)))
        .collect();
    Ok(fit_fringe(&data)?.visibility)
}

fn solve3<T: Real>(mut m: [[T; 3]; 3], mut v: [T; 3]) -> Option<[T; 3]> {
    for col in 0..3 {
        let piv =
            (col..3).max_by(|&a, &b| m[a][col].abs().partial_cmp(&m[b][col].abs()).unwrap())?;
        if m[piv][col].abs() <= T::epsilon() * T::of(1e3) * m[0][0].abs().max(T::one()) {
            return None;
        }
        m.swap(col, piv);
        v.swap(col, piv);
        for r in 0..3 {
            if r != col {
                let f = m[r][col] / m[col][col];
                for c in col..3 {
                    m[r][c] = m[r][c] - f * m[col][c];
                }
                v[r] = v[r] - f * v[col];
            }
        }
    }
    Some([v[0] / m[0][0], v[1] / m[1][1], v[2] / m[2][2]])
}
