use thiserror::Error;

use crate::hilbert::QubitAddress;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("qubit {0} appears in more than one register part")]
    AddressCollision(QubitAddress),

    #[error("qubit {0} is not part of the register")]
    UnknownAddress(QubitAddress),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("register mismatch between observable/target and state")]
    RegisterMismatch,

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("matrix is not Hermitian (max deviation {0})")]
    NotHermitian(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("expectation has non-negligible imaginary part {0}")]
    NonRealExpectation(f64),

    #[error("keep list of a partial trace must not be empty")]
    EmptyKeep,

    #[error("parameter {name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("element {kind} cannot act on {dof} qubit {addr}")]
    WrongDof {
        kind: &'static str,
        dof: &'static str,
        addr: QubitAddress,
    },

    #[error("elements may only be conditioned on a path qubit, got {0}")]
    ConditionOnNonPath(QubitAddress),

    #[error("a beam stop is not unitary; use project_out")]
    BeamStopNotUnitary,

    #[error("post-selection removed the whole state")]
    PostSelectionEmpty,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("missing entry {0}")]
    MissingEntry(String),

    #[error("probabilities sum to {0}, not 1")]
    NotNormalizedProbabilities(f64),

    #[error("shot count must be positive")]
    ZeroShots,

    #[error("count record has no events")]
    EmptyRecord,

    #[error("no eigenvalue given for outcome {0}")]
    UnlabeledOutcome(String),

    #[error("incomplete tomography settings: {0}")]
    IncompleteSettings(String),
}

pub type Result<T> = std::result::Result<T, Error>;
