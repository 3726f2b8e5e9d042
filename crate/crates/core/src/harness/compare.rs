use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::fmt_num;
use super::report::ExperimentReport;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub source: PathBuf,
    pub variant: String,
    pub master_seed: u64,
    pub key_length: usize,
    pub entropy: Option<f64>,
    pub binomial_p: Option<f64>,
    pub ind_p: Option<f64>,
    pub gof_p: Option<f64>,
    pub lrs_p: Option<f64>,
    pub error_rate: Option<f64>,
}

impl ComparisonRow {
    fn from_report(source: &Path, report: &ExperimentReport) -> Self {
        let v = report.validation.as_ref();
        ComparisonRow {
            source: source.to_owned(),
            variant: format!("{}/{}", report.config.protocol, report.config.family),
            master_seed: report.config.master_seed,
            key_length: report.results.key_length,
            entropy: v.and_then(|v| v.entropy).map(|e| e.entropy_per_bit),
            binomial_p: v.and_then(|v| v.binomial.p_value),
            ind_p: v.and_then(|v| v.ind.p_value),
            gof_p: v.and_then(|v| v.gof.p_value),
            lrs_p: v.and_then(|v| v.lrs.p_value),
            error_rate: report.results.qber,
        }
    }
}

/// One row per report; runs of the same variant are kept separate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub rows: Vec<ComparisonRow>,
}

const COLUMNS: [&str; 8] = [
    "variant",
    "seed",
    "entropy",
    "binomial p",
    "IND p",
    "GOF p",
    "LRS p",
    "error rate",
];

impl Comparison {
    pub fn render_table(&self) -> String {
        let opt = |x: Option<f64>| x.map(fmt_num).unwrap_or_else(|| "-".to_string());
        let cells: Vec<[String; 8]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.variant.clone(),
                    r.master_seed.to_string(),
                    opt(r.entropy),
                    opt(r.binomial_p),
                    opt(r.ind_p),
                    opt(r.gof_p),
                    opt(r.lrs_p),
                    opt(r.error_rate),
                ]
            })
            .collect();
        let mut widths = COLUMNS.map(str::len);
        for row in &cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.len());
            }
        }
        let line = |row: &[String]| {
            let parts: Vec<String> = row
                .iter()
                .zip(widths)
                .enumerate()
                .map(|(i, (c, w))| {
                    if i == 0 {
                        format!("{c:<w$}")
                    } else {
                        format!("{c:>w$}")
                    }
                })
                .collect();
            parts.join("  ").trim_end().to_string()
        };
        let header: Vec<String> = COLUMNS.iter().map(|s| s.to_string()).collect();
        let mut out = line(&header);
        out.push('\n');
        out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 2 * (widths.len() - 1)));
        out.push('\n');
        for row in &cells {
            out.push_str(&line(row));
            out.push('\n');
        }
        out
    }
}

pub fn compare_reports<P: AsRef<Path>>(paths: &[P]) -> Result<Comparison> {
    if paths.len() < 2 {
        return Err(Error::Config("compare needs at least two reports".into()));
    }
    let rows = paths
        .iter()
        .map(|p| {
            let p = p.as_ref();
            ExperimentReport::read(p).map(|r| ComparisonRow::from_report(p, &r))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Comparison { rows })
}
