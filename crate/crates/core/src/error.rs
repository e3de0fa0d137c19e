//! Crate-wide error type.

use thiserror::Error;

/// Result alias used across the crate.
pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("hamiltonian has no terms")]
    EmptyHamiltonian,

    #[error("qubit count {n} outside supported range {min}..={max}")]
    QubitCount { n: usize, min: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("parameter vector has length {actual}, circuit expects {expected}")]
    ParameterCount { expected: usize, actual: usize },

    #[error("state is not normalized (|1 - norm^2| = {deviation:e})")]
    NotNormalized { deviation: f64 },

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("invalid ansatz: {0}")]
    InvalidAnsatz(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("gradient norm below tolerance (exactly stationary point)")]
    VanishingGradient,

    #[error("parameter-shift rule does not apply to this objective")]
    ParameterShiftUnsupported,

    #[error("hamiltonian acts on {hamiltonian} qubits but the ansatz has {ansatz}")]
    QubitCountMismatch { hamiltonian: usize, ansatz: usize },

    #[error("csv error at line {line}: {message}")]
    Csv { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
