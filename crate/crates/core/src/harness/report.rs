//! Experiment execution and the JSON report format.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use crate::bb84::bb84_run;
use crate::bits;
use crate::e91::e91_run;
use crate::error::{Error, Result};
use crate::protocol::{Protocol, ProtocolTranscript};
use crate::randtest::{validate, BitSample, Thresholds, ValidationReport};

pub const SCHEMA_VERSION: u32 = 1;

/// Fields that may differ between otherwise identical runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportHeader {
    /// Seconds since the Unix epoch, or `SOURCE_DATE_EPOCH` when set.
    pub generated_unix_secs: u64,
    pub tool_version: String,
    pub alice_key_file: Option<String>,
    pub bob_key_file: Option<String>,
}

impl ReportHeader {
    fn now() -> Self {
        let generated_unix_secs = std::env::var("SOURCE_DATE_EPOCH")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or_else(|| {
                SystemTime::now()
                    .duration_since(UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0)
            });
        ReportHeader {
            generated_unix_secs,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            alice_key_file: None,
            bob_key_file: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub rounds: usize,
    pub sifted: usize,
    pub sift_fraction: f64,
    pub key_length: usize,
    pub errors: usize,
    /// `None` when no round survived sifting.
    pub qber: Option<f64>,
}

/// One hardware-sized job worth of rounds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobSummary {
    pub job: usize,
    pub first_round: usize,
    pub rounds: usize,
    pub sifted: usize,
    pub errors: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub header: ReportHeader,
    pub schema_version: u32,
    pub config: ExperimentConfig,
    pub results: RunSummary,
    /// Validation of Alice's sifted key; `None` if the key is empty.
    pub validation: Option<ValidationReport>,
    pub jobs: Vec<JobSummary>,
}

impl ExperimentReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is always serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = read_text(path)?;
        check_schema(path, &text)?;
        Self::from_json(&text).map_err(|source| Error::Json {
            path: path.to_owned(),
            source,
        })
    }

    /// True when the key was validated and nothing failed.
    pub fn passed(&self) -> bool {
        self.validation
            .as_ref()
            .is_some_and(ValidationReport::passed)
    }
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

/// Rejects documents whose `schema_version` differs from ours before a full
/// parse is attempted.
pub(crate) fn check_schema(path: &Path, text: &str) -> Result<()> {
    #[derive(Deserialize)]
    struct Probe {
        schema_version: u32,
    }
    let probe: Probe = serde_json::from_str(text).map_err(|source| Error::Json {
        path: path.to_owned(),
        source,
    })?;
    if probe.schema_version != SCHEMA_VERSION {
        return Err(Error::SchemaMismatch {
            path: path.to_owned(),
            found: probe.schema_version,
            expected: SCHEMA_VERSION,
        });
    }
    Ok(())
}

/// Runs the configured protocol. No files are touched.
pub fn execute(config: &ExperimentConfig) -> Result<(ExperimentReport, ProtocolTranscript)> {
    config.validate()?;
    let noise = config.noise();
    let transcript = match config.protocol {
        Protocol::Bb84 => bb84_run(
            config.rounds,
            config.family,
            &noise,
            &config.eve_config(),
            config.master_seed,
        )?,
        Protocol::E91 => e91_run(config.rounds, config.family, &noise, config.master_seed)?,
    };

    let sifted = transcript.alice_key.len();
    let results = RunSummary {
        rounds: config.rounds,
        sifted,
        sift_fraction: transcript.sift_fraction(),
        key_length: sifted,
        errors: transcript.error_count(),
        qber: transcript.qber(),
    };

    let validation = if sifted == 0 {
        None
    } else {
        let label = format!("{}/{}", config.protocol, config.family);
        let sample = BitSample::new(transcript.alice_key.clone(), label)?;
        Some(validate(&sample, &Thresholds::default())?)
    };

    let jobs = transcript
        .rounds
        .chunks(config.batch_size)
        .enumerate()
        .map(|(job, chunk)| JobSummary {
            job,
            first_round: chunk[0].index,
            rounds: chunk.len(),
            sifted: chunk.iter().filter(|r| r.sifted).count(),
            errors: chunk
                .iter()
                .filter(|r| r.sifted && r.alice_bit != r.bob_bit)
                .count(),
        })
        .collect();

    let report = ExperimentReport {
        header: ReportHeader::now(),
        schema_version: SCHEMA_VERSION,
        config: config.clone(),
        results,
        validation,
        jobs,
    };
    Ok((report, transcript))
}

/// `<report>.alice.txt` / `<report>.bob.txt`.
pub fn key_paths(output_path: &Path) -> (PathBuf, PathBuf) {
    (
        output_path.with_extension("alice.txt"),
        output_path.with_extension("bob.txt"),
    )
}

fn write(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

/// Runs the experiment and writes the report, both sifted keys (ASCII bit
/// format) and, if requested, the full transcript.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    if config.output_path.as_os_str().is_empty() {
        return Err(Error::Config("output path is required".into()));
    }
    let (mut report, transcript) = execute(config)?;
    let (alice_path, bob_path) = key_paths(&config.output_path);
    let file_name = |p: &Path| p.file_name().map(|n| n.to_string_lossy().into_owned());
    report.header.alice_key_file = file_name(&alice_path);
    report.header.bob_key_file = file_name(&bob_path);

    write(&config.output_path, &report.to_json())?;
    write(&alice_path, &(bits::to_ascii(&transcript.alice_key) + "\n"))?;
    write(&bob_path, &(bits::to_ascii(&transcript.bob_key) + "\n"))?;
    if let Some(path) = &config.transcript_path {
        let json = serde_json::to_string(&transcript).expect("transcript is always serializable");
        write(path, &json)?;
    }
    Ok(report)
}

/// Decodes a bitstream file and validates it.
pub fn validate_file(
    path: &Path,
    format: crate::randtest::BitFormat,
    thresholds: &Thresholds,
) -> Result<ValidationReport> {
    let bits = crate::randtest::read_bits(path, format)?;
    let label = path.display().to_string();
    validate(&BitSample::new(bits, label)?, thresholds)
}
