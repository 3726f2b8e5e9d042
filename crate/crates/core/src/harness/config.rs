use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::channel::{BasisFamily, EveConfig, NoiseConfig};
use crate::error::{Error, Result};
use crate::protocol::Protocol;

/// Qubits per hardware job; rounds are grouped into jobs of this size.
pub const DEFAULT_BATCH_SIZE: usize = 128;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub protocol: Protocol,
    pub family: BasisFamily,
    pub rounds: usize,
    pub batch_size: usize,
    pub readout_epsilon: f64,
    pub depolarizing_p: f64,
    pub eve: bool,
    pub master_seed: u64,
    /// Report destination. Not echoed into the report.
    #[serde(skip)]
    pub output_path: PathBuf,
    /// Optional full transcript destination.
    #[serde(skip)]
    pub transcript_path: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(protocol: Protocol, family: BasisFamily, rounds: usize, master_seed: u64) -> Self {
        ExperimentConfig {
            protocol,
            family,
            rounds,
            batch_size: DEFAULT_BATCH_SIZE,
            readout_epsilon: 0.0,
            depolarizing_p: 0.0,
            eve: false,
            master_seed,
            output_path: PathBuf::new(),
            transcript_path: None,
        }
    }

    pub fn noise(&self) -> NoiseConfig {
        NoiseConfig {
            readout_epsilon: self.readout_epsilon,
            depolarizing_p: self.depolarizing_p,
        }
    }

    pub fn eve_config(&self) -> EveConfig {
        if self.eve {
            EveConfig::intercept_resend()
        } else {
            EveConfig::disabled()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.rounds == 0 {
            return Err(Error::ZeroRounds);
        }
        if self.batch_size == 0 {
            return Err(Error::Config("batch size must be at least 1".into()));
        }
        if self.eve && self.protocol == Protocol::E91 {
            return Err(Error::Config(
                "the eavesdropper is only defined for the bb84 transmission channel".into(),
            ));
        }
        self.noise().validate()
    }
}
