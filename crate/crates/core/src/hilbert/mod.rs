//! Dense linear algebra over small labeled qubit registers.
//!
//! Amplitudes are ordered big-endian by logical index: the first qubit of a
//! register is the most significant bit of the basis index, so `|0011⟩` on
//! the Dicke register has qubits 3 and 4 excited and index 3.
//!
//! Everything here is an immutable value; operations return new values.

mod density;
mod eigen;
mod operator;
mod pauli;
mod state;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use density::{fidelity, partial_trace, DensityMatrix};
pub use eigen::{hermitian_eigen, HermitianEigen};
pub use operator::Operator;
pub use pauli::{expectation, expectation_complex, Observable, Pauli, PauliString, QuantumState};
pub use state::{apply, tensor, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Photon {
    A,
    B,
}

/// Physical degree of freedom carrying a qubit.
///
/// Logical basis conventions: `H→0, V→1` for polarization, `r→0, ℓ→1` for
/// path, and clockwise `C→0`, counterclockwise `A→1` for the Sagnac loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dof {
    Path,
    Polarization,
    Sagnac,
}

impl Dof {
    pub fn name(self) -> &'static str {
        match self {
            Dof::Path => "path",
            Dof::Polarization => "polarization",
            Dof::Sagnac => "sagnac",
        }
    }
}

/// A qubit identified by the photon and degree of freedom that carry it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct QubitAddress {
    pub photon: Photon,
    pub dof: Dof,
}

impl QubitAddress {
    pub const fn new(photon: Photon, dof: Dof) -> Self {
        QubitAddress { photon, dof }
    }

    pub const A_PATH: QubitAddress = QubitAddress::new(Photon::A, Dof::Path);
    pub const A_POL: QubitAddress = QubitAddress::new(Photon::A, Dof::Polarization);
    pub const B_PATH: QubitAddress = QubitAddress::new(Photon::B, Dof::Path);
    pub const B_POL: QubitAddress = QubitAddress::new(Photon::B, Dof::Polarization);
    pub const A_SAGNAC: QubitAddress = QubitAddress::new(Photon::A, Dof::Sagnac);
    pub const B_SAGNAC: QubitAddress = QubitAddress::new(Photon::B, Dof::Sagnac);
}

impl fmt::Display for QubitAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = match self.photon {
            Photon::A => "A",
            Photon::B => "B",
        };
        let d = match self.dof {
            Dof::Path => "path",
            Dof::Polarization => "pol",
            Dof::Sagnac => "sagnac",
        };
        write!(f, "{p}.{d}")
    }
}

impl FromStr for QubitAddress {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (p, d) = s.split_once('.').ok_or_else(|| {
            Error::Parse(format!("qubit address `{s}` is not of the form PHOTON.DOF"))
        })?;
        let photon = match p.trim() {
            "A" | "a" => Photon::A,
            "B" | "b" => Photon::B,
            other => return Err(Error::Parse(format!("unknown photon `{other}`"))),
        };
        let dof = match d.trim().to_ascii_lowercase().as_str() {
            "path" | "k" | "momentum" => Dof::Path,
            "pol" | "polarization" | "pi" => Dof::Polarization,
            "sagnac" | "loop" => Dof::Sagnac,
            other => return Err(Error::Parse(format!("unknown degree of freedom `{other}`"))),
        };
        Ok(QubitAddress { photon, dof })
    }
}

impl From<QubitAddress> for String {
    fn from(a: QubitAddress) -> String {
        a.to_string()
    }
}

impl TryFrom<String> for QubitAddress {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Ordered list of distinct qubits; position `i` is logical qubit `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<QubitAddress>", into = "Vec<QubitAddress>")]
pub struct Register(Vec<QubitAddress>);

impl Register {
    pub fn new(qubits: Vec<QubitAddress>) -> Result<Self> {
        for (i, q) in qubits.iter().enumerate() {
            if qubits[..i].contains(q) {
                return Err(Error::AddressCollision(*q));
            }
        }
        Ok(Register(qubits))
    }

    /// 1 = A.path, 2 = A.pol, 3 = B.path, 4 = B.pol.
    pub fn dicke() -> Self {
        Register(vec![
            QubitAddress::A_PATH,
            QubitAddress::A_POL,
            QubitAddress::B_PATH,
            QubitAddress::B_POL,
        ])
    }

    /// 1 = B.path (control, before the second beam splitter), 2 = B.sagnac (target).
    pub fn cphase() -> Self {
        Register(vec![QubitAddress::B_PATH, QubitAddress::B_SAGNAC])
    }

    pub fn single(q: QubitAddress) -> Self {
        Register(vec![q])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dim(&self) -> usize {
        1 << self.0.len()
    }

    pub fn qubits(&self) -> &[QubitAddress] {
        &self.0
    }

    pub fn contains(&self, q: QubitAddress) -> bool {
        self.0.contains(&q)
    }

    /// Zero-based position of `q`.
    pub fn position(&self, q: QubitAddress) -> Result<usize> {
        self.0
            .iter()
            .position(|&x| x == q)
            .ok_or(Error::UnknownAddress(q))
    }

    /// One-based logical index of `q`.
    pub fn logical_index(&self, q: QubitAddress) -> Result<usize> {
        self.position(q).map(|p| p + 1)
    }

    pub fn at_logical(&self, index: usize) -> Result<QubitAddress> {
        index
            .checked_sub(1)
            .and_then(|i| self.0.get(i).copied())
            .ok_or(Error::OutOfRange {
                name: "logical index",
                value: index as f64,
                range: "1..=len",
            })
    }

    /// Bit of the basis index that stores the qubit at `position`.
    pub(crate) fn bit(&self, position: usize) -> usize {
        self.0.len() - 1 - position
    }

    pub fn concat(&self, other: &Register) -> Result<Register> {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Register::new(v)
    }
}

impl TryFrom<Vec<QubitAddress>> for Register {
    type Error = Error;
    fn try_from(v: Vec<QubitAddress>) -> Result<Self> {
        Register::new(v)
    }
}

impl From<Register> for Vec<QubitAddress> {
    fn from(r: Register) -> Self {
        r.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_register_maps() {
        let d = Register::dicke();
        assert_eq!(d.logical_index(QubitAddress::A_PATH).unwrap(), 1);
        assert_eq!(d.logical_index(QubitAddress::A_POL).unwrap(), 2);
        assert_eq!(d.logical_index(QubitAddress::B_PATH).unwrap(), 3);
        assert_eq!(d.logical_index(QubitAddress::B_POL).unwrap(), 4);
        let c = Register::cphase();
        assert_eq!(c.at_logical(1).unwrap(), QubitAddress::B_PATH);
        assert_eq!(c.at_logical(2).unwrap(), QubitAddress::B_SAGNAC);
        assert!(c.at_logical(3).is_err());
        assert!(c.at_logical(0).is_err());
    }

    #[test]
    fn duplicate_qubits_rejected() {
        let r = Register::new(vec![QubitAddress::A_PATH, QubitAddress::A_PATH]);
        assert_eq!(r, Err(Error::AddressCollision(QubitAddress::A_PATH)));
    }

    #[test]
    fn address_parse_display() {
        for q in Register::dicke()
            .qubits()
            .iter()
            .chain(Register::cphase().qubits())
        {
            assert_eq!(q.to_string().parse::<QubitAddress>().unwrap(), *q);
        }
        assert_eq!(
            "A.polarization".parse::<QubitAddress>().unwrap(),
            QubitAddress::A_POL
        );
        assert!("C.path".parse::<QubitAddress>().is_err());
        assert!("Apath".parse::<QubitAddress>().is_err());
    }
}
