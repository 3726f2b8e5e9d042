//! Randomness validation for shared secrets: MCV min-entropy, an exact
//! binomial balance test, and the IND/GOF/LRS IID screens.

mod entropy;
mod iid;
pub mod suffix;

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bits;
use crate::error::{Error, Result};

pub use entropy::{binomial_balance_p, mcv_min_entropy, MinEntropy};
pub use iid::{
    chi_square_sf, gof_test, ind_test, lrs_test, TestStat, GOF_MIN_LEN, IND_MIN_LEN, LRS_MIN_LEN,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitSample {
    bits: Vec<u8>,
    pub source_label: String,
}

impl BitSample {
    pub fn new(bits: Vec<u8>, source_label: impl Into<String>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::Empty);
        }
        if let Some(i) = bits.iter().position(|&b| b > 1) {
            return Err(Error::Decode(format!(
                "value {} at bit {i} is not 0 or 1",
                bits[i]
            )));
        }
        Ok(BitSample {
            bits,
            source_label: source_label.into(),
        })
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BitFormat {
    /// One `'0'`/`'1'` per character; whitespace ignored.
    Ascii,
    /// Eight bits per byte, most significant first.
    Binary,
}

impl std::str::FromStr for BitFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ascii" => Ok(BitFormat::Ascii),
            "binary" => Ok(BitFormat::Binary),
            other => Err(Error::Config(format!("unknown bit format {other:?}"))),
        }
    }
}

/// Reads a bitstream file.
pub fn read_bits(path: &Path, format: BitFormat) -> Result<Vec<u8>> {
    let raw = std::fs::read(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    let bits = match format {
        BitFormat::Ascii => {
            let text = std::str::from_utf8(&raw).map_err(|e| Error::Decode(e.to_string()))?;
            bits::from_ascii(text)?
        }
        BitFormat::Binary => bits::from_bytes(&raw),
    };
    if bits.is_empty() {
        return Err(Error::Empty);
    }
    Ok(bits)
}

/// Pass lines for the four p-values. Entropy is reported without one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub binomial: f64,
    pub ind: f64,
    pub gof: f64,
    pub lrs: f64,
}

impl Thresholds {
    pub const DEFAULT_BINOMIAL: f64 = 0.000005;
    pub const DEFAULT_IID: f64 = 0.001;

    pub fn new(binomial: f64, iid: f64) -> Self {
        Thresholds {
            binomial,
            ind: iid,
            gof: iid,
            lrs: iid,
        }
    }
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds::new(Self::DEFAULT_BINOMIAL, Self::DEFAULT_IID)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    NotRun,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub p_value: Option<f64>,
    pub statistic: Option<f64>,
    pub degenerate: bool,
    pub threshold: f64,
    pub verdict: Verdict,
}

impl TestResult {
    fn not_run(threshold: f64) -> Self {
        TestResult {
            p_value: None,
            statistic: None,
            degenerate: false,
            threshold,
            verdict: Verdict::NotRun,
        }
    }

    fn judged(stat: TestStat, threshold: f64) -> Self {
        TestResult {
            p_value: Some(stat.p_value),
            // infinity has no JSON form
            statistic: stat.statistic.is_finite().then_some(stat.statistic),
            degenerate: stat.degenerate,
            threshold,
            verdict: if stat.p_value >= threshold {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
        }
    }

    fn gated(
        bits: &[u8],
        min_len: usize,
        threshold: f64,
        test: fn(&[u8]) -> Result<TestStat>,
    ) -> Result<Self> {
        if bits.len() < min_len {
            return Ok(Self::not_run(threshold));
        }
        Ok(Self::judged(test(bits)?, threshold))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub source_label: String,
    pub length: usize,
    pub ones: usize,
    /// `None` when the sample is shorter than two bits.
    pub entropy: Option<MinEntropy>,
    pub binomial: TestResult,
    pub ind: TestResult,
    pub gof: TestResult,
    pub lrs: TestResult,
    pub thresholds: Thresholds,
}

impl ValidationReport {
    /// No test returned a failing verdict.
    pub fn passed(&self) -> bool {
        self.tests().iter().all(|(_, t)| t.verdict != Verdict::Fail)
    }

    pub fn tests(&self) -> [(&'static str, &TestResult); 4] {
        [
            ("binomial", &self.binomial),
            ("ind", &self.ind),
            ("gof", &self.gof),
            ("lrs", &self.lrs),
        ]
    }
}

/// Runs every measure whose length precondition holds; the rest are marked
/// not run.
pub fn validate(sample: &BitSample, thresholds: &Thresholds) -> Result<ValidationReport> {
    let bits = sample.bits();
    if bits.is_empty() {
        return Err(Error::Empty);
    }
    let entropy = if bits.len() >= 2 {
        Some(mcv_min_entropy(bits)?)
    } else {
        None
    };
    let p = binomial_balance_p(bits)?;
    let binomial = TestResult::judged(
        TestStat {
            p_value: p,
            statistic: bits::ones(bits) as f64,
            degenerate: false,
        },
        thresholds.binomial,
    );
    Ok(ValidationReport {
        source_label: sample.source_label.clone(),
        length: bits.len(),
        ones: bits::ones(bits),
        entropy,
        binomial,
        ind: TestResult::gated(bits, IND_MIN_LEN, thresholds.ind, ind_test)?,
        gof: TestResult::gated(bits, GOF_MIN_LEN, thresholds.gof, gof_test)?,
        lrs: TestResult::gated(bits, LRS_MIN_LEN, thresholds.lrs, lrs_test)?,
        thresholds: *thresholds,
    })
}
