use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported qubit count {0}, expected 1 or 2")]
    QubitCount(usize),

    #[error("qubit index {index} out of range for a {n_qubits}-qubit state")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("control and target must differ (both are {0})")]
    SameControlTarget(usize),

    #[error("CNOT requires a 2-qubit state")]
    NotTwoQubits,

    #[error("amplitudes are not finite or not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("{name} = {value} is not a probability in [0, 1]")]
    InvalidProbability { name: &'static str, value: f64 },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("empty input")]
    Empty,

    #[error("sample of length {len} is too short, need at least {min}")]
    TooShort { len: usize, min: usize },

    #[error("round count must be at least 1")]
    ZeroRounds,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("undecodable bit stream: {0}")]
    Decode(String),

    #[error("schema version mismatch: {path} has version {found}, expected {expected}")]
    SchemaMismatch {
        path: PathBuf,
        found: u32,
        expected: u32,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidProbability { name, value })
    }
}
