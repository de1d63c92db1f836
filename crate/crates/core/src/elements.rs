//! Optical elements as gates on labeled qubits.
//!
//! Conventions:
//! - a beam splitter is the Hadamard on the path (or Sagnac) qubit it acts on;
//! - `HWP(θ) = cos2θ·Z + sin2θ·X`, so `HWP(0°) = Z`, `HWP(45°) = X`,
//!   `HWP(22.5°) = H` with no extra global phase;
//! - `QWP(θ) = R(−θ)·diag(1, i)·R(θ)`;
//! - a glass plate adds `e^{iφ}` to the logical-1 mode of its qubit;
//! - an element inserted in one path mode only is a controlled gate with
//!   the path qubit as control.
//!
//! Beam stops are the only non-unitary element and go through [`project_out`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{Dof, Operator, QubitAddress, StateVector};
use crate::scalar::{c, cis, re, Real, C};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ElementKind<T> {
    BeamSplitter,
    PolarizingBeamSplitter,
    HalfWavePlate {
        angle: T,
    },
    QuarterWavePlate {
        angle: T,
    },
    GlassPlate {
        phase: T,
    },
    /// Blocks the mode carrying logical value `blocked`.
    BeamStop {
        blocked: u8,
    },
}

impl<T> ElementKind<T> {
    pub fn name(&self) -> &'static str {
        match self {
            ElementKind::BeamSplitter => "BS",
            ElementKind::PolarizingBeamSplitter => "PBS",
            ElementKind::HalfWavePlate { .. } => "HWP",
            ElementKind::QuarterWavePlate { .. } => "QWP",
            ElementKind::GlassPlate { .. } => "GlassPlate",
            ElementKind::BeamStop { .. } => "BeamStop",
        }
    }
}

/// The element sits only in the mode where `qubit` has value `is`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition {
    pub qubit: QubitAddress,
    pub is: u8,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpticalElement<T> {
    pub kind: ElementKind<T>,
    pub on: QubitAddress,
    pub when: Option<Condition>,
}

impl<T: Real> OpticalElement<T> {
    pub fn new(kind: ElementKind<T>, on: QubitAddress) -> Self {
        OpticalElement {
            kind,
            on,
            when: None,
        }
    }

    pub fn bs(on: QubitAddress) -> Self {
        Self::new(ElementKind::BeamSplitter, on)
    }

    pub fn pbs(on: QubitAddress) -> Self {
        Self::new(ElementKind::PolarizingBeamSplitter, on)
    }

    pub fn hwp(angle: T, on: QubitAddress) -> Self {
        Self::new(ElementKind::HalfWavePlate { angle }, on)
    }

    pub fn qwp(angle: T, on: QubitAddress) -> Self {
        Self::new(ElementKind::QuarterWavePlate { angle }, on)
    }

    pub fn glass(phase: T, on: QubitAddress) -> Self {
        Self::new(ElementKind::GlassPlate { phase }, on)
    }

    pub fn stop(on: QubitAddress, blocked: u8) -> Self {
        Self::new(ElementKind::BeamStop { blocked }, on)
    }

    /// Places the element in the mode `qubit = is` only.
    pub fn when(mut self, qubit: QubitAddress, is: u8) -> Self {
        self.when = Some(Condition { qubit, is });
        self
    }
}

/// A unitary together with the qubits it acts on (first target = high bit).
#[derive(Debug, Clone, PartialEq)]
pub struct PlacedGate<T> {
    pub op: Operator<T>,
    pub targets: Vec<QubitAddress>,
}

impl<T: Real> PlacedGate<T> {
    pub fn apply(&self, state: &StateVector<T>) -> Result<StateVector<T>> {
        state.apply(&self.op, &self.targets)
    }
}

pub fn hadamard<T: Real>() -> Operator<T> {
    let s = re(T::FRAC_1_SQRT_2());
    Operator::from_row_major(2, vec![s, s, s, -s]).expect("2x2")
}

pub fn half_wave_plate<T: Real>(angle: T) -> Operator<T> {
    let (s, co) = (angle + angle).sin_cos();
    Operator::from_row_major(2, vec![re(co), re(s), re(s), re(-co)]).expect("2x2")
}

pub fn quarter_wave_plate<T: Real>(angle: T) -> Operator<T> {
    let (s, co) = angle.sin_cos();
    let off = c(s * co, -s * co);
    Operator::from_row_major(2, vec![c(co * co, s * s), off, off, c(s * s, co * co)]).expect("2x2")
}

pub fn phase_shift<T: Real>(phase: T) -> Operator<T> {
    Operator::diagonal(&[re(T::one()), cis(phase)])
}

/// `|c⟩⟨c| ⊗ U + |1−c⟩⟨1−c| ⊗ I` on (control, target).
pub fn controlled<T: Real>(u: &Operator<T>, control_value: u8) -> Operator<T> {
    let d = u.dim();
    let id = Operator::identity(d);
    let (p_on, p_off) = if control_value == 0 {
        (proj::<T>(0), proj::<T>(1))
    } else {
        (proj::<T>(1), proj::<T>(0))
    };
    &p_on.kron(u) + &p_off.kron(&id)
}

fn proj<T: Real>(v: usize) -> Operator<T> {
    let mut d = [re(T::zero()), re(T::zero())];
    d[v] = re(T::one());
    Operator::diagonal(&d)
}

fn require_dof(kind: &'static str, addr: QubitAddress, allowed: &[Dof]) -> Result<()> {
    if allowed.contains(&addr.dof) {
        Ok(())
    } else {
        Err(Error::WrongDof {
            kind,
            dof: addr.dof.name(),
            addr,
        })
    }
}

fn require_angle<T: Real>(name: &'static str, x: T) -> Result<()> {
    if x.is_finite() && x >= T::zero() && x < T::TAU() {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name,
            value: x.as_f64(),
            range: "[0, 2π)",
        })
    }
}

/// Gate implemented by an element, with the addresses it acts on.
pub fn element_unitary<T: Real>(e: &OpticalElement<T>) -> Result<PlacedGate<T>> {
    let name = e.kind.name();
    let (local, mut targets) = match e.kind {
        ElementKind::BeamSplitter => {
            require_dof(name, e.on, &[Dof::Path, Dof::Sagnac])?;
            (hadamard(), vec![e.on])
        }
        ElementKind::PolarizingBeamSplitter => {
            require_dof(name, e.on, &[Dof::Path])?;
            if e.when.is_some() {
                return Err(Error::Parse(
                    "a PBS spans both path modes and cannot be conditioned".into(),
                ));
            }
            // H transmitted (path kept), V reflected (path swapped)
            let pol = QubitAddress::new(e.on.photon, Dof::Polarization);
            let x = crate::hilbert::Pauli::X.matrix();
            (controlled(&x, 1), vec![pol, e.on])
        }
        ElementKind::HalfWavePlate { angle } => {
            require_dof(name, e.on, &[Dof::Polarization])?;
            require_angle("angle", angle)?;
            (half_wave_plate(angle), vec![e.on])
        }
        ElementKind::QuarterWavePlate { angle } => {
            require_dof(name, e.on, &[Dof::Polarization])?;
            require_angle("angle", angle)?;
            (quarter_wave_plate(angle), vec![e.on])
        }
        ElementKind::GlassPlate { phase } => {
            require_dof(name, e.on, &[Dof::Path, Dof::Sagnac])?;
            require_angle("phase", phase)?;
            (phase_shift(phase), vec![e.on])
        }
        ElementKind::BeamStop { .. } => return Err(Error::BeamStopNotUnitary),
    };
    let Some(cond) = e.when else {
        return Ok(PlacedGate { op: local, targets });
    };
    if cond.qubit.dof != Dof::Path {
        return Err(Error::ConditionOnNonPath(cond.qubit));
    }
    if cond.is > 1 {
        return Err(Error::OutOfRange {
            name: "condition value",
            value: cond.is as f64,
            range: "{0, 1}",
        });
    }
    if targets.contains(&cond.qubit) {
        return Err(Error::AddressCollision(cond.qubit));
    }
    targets.insert(0, cond.qubit);
    Ok(PlacedGate {
        op: controlled(&local, cond.is),
        targets,
    })
}

/// Zeroes the amplitudes where `on` has value `blocked` and renormalizes.
///
/// Returns the post-selected state and the surviving probability.
pub fn project_out<T: Real>(
    on: QubitAddress,
    blocked: u8,
    state: &StateVector<T>,
) -> Result<(StateVector<T>, T)> {
    if blocked > 1 {
        return Err(Error::OutOfRange {
            name: "blocked value",
            value: blocked as f64,
            range: "{0, 1}",
        });
    }
    let reg = state.register();
    let bit = reg.bit(reg.position(on)?);
    let amps: Vec<C<T>> = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            if ((i >> bit) & 1) as u8 == blocked {
                re(T::zero())
            } else {
                a
            }
        })
        .collect();
    let p: T = amps.iter().map(|a| a.norm_sqr()).sum();
    if p <= T::zero() {
        return Err(Error::PostSelectionEmpty);
    }
    let out = StateVector::normalized(reg.clone(), amps)?;
    Ok((out, p))
}

/// Runs elements in order; beam stops post-select and multiply the success probability.
pub fn propagate<T: Real>(
    elements: &[OpticalElement<T>],
    state: &StateVector<T>,
) -> Result<(StateVector<T>, T)> {
    let mut s = state.clone();
    let mut p = T::one();
    for e in elements {
        match e.kind {
            ElementKind::BeamStop { blocked } => {
                if e.when.is_some() {
                    return Err(Error::Parse(
                        "beam stops block a whole mode and take no condition".into(),
                    ));
                }
                let (next, q) = project_out(e.on, blocked, &s)?;
                s = next;
                p *= q;
            }
            _ => s = element_unitary(e)?.apply(&s)?,
        }
    }
    Ok((s, p))
}

/// JSON form of an element, e.g.
/// `{"kind":"HWP","angle_deg":45,"on":"A.pol","when":{"qubit":"A.path","is":1}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum ElementSpec {
    BS {
        on: QubitAddress,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        when: Option<Condition>,
    },
    PBS {
        on: QubitAddress,
    },
    HWP {
        angle_deg: f64,
        on: QubitAddress,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        when: Option<Condition>,
    },
    QWP {
        angle_deg: f64,
        on: QubitAddress,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        when: Option<Condition>,
    },
    GlassPlate {
        phase_rad: f64,
        on: QubitAddress,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        when: Option<Condition>,
    },
    BeamStop {
        on: QubitAddress,
        blocks: u8,
    },
}

impl ElementSpec {
    pub fn to_element<T: Real>(&self) -> OpticalElement<T> {
        let (kind, on, when) = match *self {
            ElementSpec::BS { on, when } => (ElementKind::BeamSplitter, on, when),
            ElementSpec::PBS { on } => (ElementKind::PolarizingBeamSplitter, on, None),
            ElementSpec::HWP {
                angle_deg,
                on,
                when,
            } => (
                ElementKind::HalfWavePlate {
                    angle: T::of(angle_deg.to_radians()),
                },
                on,
                when,
            ),
            ElementSpec::QWP {
                angle_deg,
                on,
                when,
            } => (
                ElementKind::QuarterWavePlate {
                    angle: T::of(angle_deg.to_radians()),
                },
                on,
                when,
            ),
            ElementSpec::GlassPlate {
                phase_rad,
                on,
                when,
            } => (
                ElementKind::GlassPlate {
                    phase: T::of(phase_rad),
                },
                on,
                when,
            ),
            ElementSpec::BeamStop { on, blocks } => {
                (ElementKind::BeamStop { blocked: blocks }, on, None)
            }
        };
        OpticalElement { kind, on, when }
    }
}
