//! Experiment runner, report files and side-by-side comparison.

mod compare;
mod config;
mod report;

pub use compare::{compare_reports, Comparison, ComparisonRow};
pub use config::{ExperimentConfig, DEFAULT_BATCH_SIZE};
pub use report::{
    execute, key_paths, run_experiment, validate_file, ExperimentReport, JobSummary, ReportHeader,
    RunSummary, SCHEMA_VERSION,
};

/// Formats a number with at least six significant digits.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0.000000".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    if (-3..6).contains(&magnitude) {
        let decimals = (5 - magnitude).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.5e}")
    }
}
