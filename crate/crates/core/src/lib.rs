//! Desk-scale simulator for two photonic experiments on path and
//! polarization qubits: a four-qubit phased Dicke state certified by
//! structure-factor witnesses, and a single-photon C-Phase gate in a
//! displaced Sagnac interferometer.
//!
//! Every numeric type is generic over [`scalar::Real`] (`f32` or `f64`);
//! the aliases below fix the precision.

pub mod counts;
pub mod cphase;
pub mod elements;
pub mod error;
pub mod hilbert;
pub mod scalar;
pub mod states;
pub mod tomo;
pub mod witness;

pub use error::{Error, Result};
pub use hilbert::{
    DensityMatrix, Observable, Operator, Pauli, PauliString, QubitAddress, Register, StateVector,
};
pub use scalar::Real;

pub type StateVectorF64 = hilbert::StateVector<f64>;
pub type DensityMatrixF64 = hilbert::DensityMatrix<f64>;
pub type OperatorF64 = hilbert::Operator<f64>;
pub type ObservableF64 = hilbert::Observable<f64>;
pub type WitnessReportF64 = witness::WitnessReport<f64>;
pub type ReconstructionF64 = tomo::ReconstructionResult<f64>;

pub type StateVectorF32 = hilbert::StateVector<f32>;
pub type DensityMatrixF32 = hilbert::DensityMatrix<f32>;
pub type OperatorF32 = hilbert::Operator<f32>;
pub type ObservableF32 = hilbert::Observable<f32>;
pub type WitnessReportF32 = witness::WitnessReport<f32>;
pub type ReconstructionF32 = tomo::ReconstructionResult<f32>;
