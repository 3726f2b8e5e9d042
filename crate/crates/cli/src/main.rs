use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qkdlab::harness::{self, fmt_num, ExperimentConfig, ExperimentReport, DEFAULT_BATCH_SIZE};
use qkdlab::randtest::{BitFormat, Thresholds, ValidationReport, Verdict};
use qkdlab::{BasisFamily, Protocol};

const EXIT_VERDICT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "qkdlab",
    version,
    about = "BB84/E91 key distribution simulator and key validator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a protocol and write a report plus both sifted keys.
    Run(RunArgs),
    /// Run the entropy and IID checks on a bitstream file.
    Validate(ValidateArgs),
    /// Tabulate several reports side by side.
    Compare(CompareArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ProtocolArg {
    Bb84,
    E91,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Hadamard,
    Sx,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Ascii,
    Binary,
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long, value_enum)]
    protocol: ProtocolArg,
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long)]
    rounds: usize,
    #[arg(long, default_value_t = DEFAULT_BATCH_SIZE)]
    batch_size: usize,
    #[arg(long = "readout-eps", default_value_t = 0.0)]
    readout_eps: f64,
    #[arg(long = "depol-p", default_value_t = 0.0)]
    depol_p: f64,
    /// Enable the intercept-resend eavesdropper (bb84 only).
    #[arg(long)]
    eve: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report path; keys go next to it as <stem>.alice.txt / <stem>.bob.txt.
    #[arg(long)]
    out: PathBuf,
    /// Also write the full round-by-round transcript here.
    #[arg(long)]
    transcript: Option<PathBuf>,
}

#[derive(clap::Args)]
struct ValidateArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "ascii")]
    format: FormatArg,
    #[arg(long, default_value_t = Thresholds::DEFAULT_BINOMIAL)]
    binomial_threshold: f64,
    #[arg(long, default_value_t = Thresholds::DEFAULT_IID)]
    iid_threshold: f64,
    /// Print the report as JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(clap::Args)]
struct CompareArgs {
    #[arg(required = true)]
    reports: Vec<PathBuf>,
    /// Print the aggregate as JSON instead of a table.
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Validate(args) => validate(args),
        Command::Compare(args) => compare(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn verdict_code(passed: bool) -> ExitCode {
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERDICT_FAIL)
    }
}

fn run(args: RunArgs) -> qkdlab::Result<ExitCode> {
    let protocol = match args.protocol {
        ProtocolArg::Bb84 => Protocol::Bb84,
        ProtocolArg::E91 => Protocol::E91,
    };
    let family = match args.family {
        FamilyArg::Hadamard => BasisFamily::Hadamard,
        FamilyArg::Sx => BasisFamily::Sx,
    };
    let config = ExperimentConfig {
        batch_size: args.batch_size,
        readout_epsilon: args.readout_eps,
        depolarizing_p: args.depol_p,
        eve: args.eve,
        output_path: args.out,
        transcript_path: args.transcript,
        ..ExperimentConfig::new(protocol, family, args.rounds, args.seed)
    };
    let report = harness::run_experiment(&config)?;
    print_run(&report, &config);
    Ok(verdict_code(report.passed()))
}

fn print_run(report: &ExperimentReport, config: &ExperimentConfig) {
    let r = &report.results;
    println!("protocol      {}/{}", config.protocol, config.family);
    println!(
        "rounds        {} in {} jobs of {}",
        r.rounds,
        report.jobs.len(),
        config.batch_size
    );
    println!(
        "sifted        {} (fraction {})",
        r.sifted,
        fmt_num(r.sift_fraction)
    );
    match r.qber {
        Some(q) => println!("error rate    {} ({} errors)", fmt_num(q), r.errors),
        None => println!("error rate    - (empty key)"),
    }
    match &report.validation {
        Some(v) => print_validation(v),
        None => println!("validation    not run (empty key)"),
    }
    println!("report        {}", config.output_path.display());
}

fn print_validation(v: &ValidationReport) {
    println!("bits          {} ({} ones)", v.length, v.ones);
    match v.entropy {
        Some(e) => println!("entropy       {} per bit", fmt_num(e.entropy_per_bit)),
        None => println!("entropy       not run"),
    }
    for (name, t) in v.tests() {
        let verdict = match t.verdict {
            Verdict::Pass => "pass",
            Verdict::Fail => "FAIL",
            Verdict::NotRun => "not run",
        };
        let p = t.p_value.map(fmt_num).unwrap_or_else(|| "-".into());
        let degenerate = if t.degenerate { " (degenerate)" } else { "" };
        println!(
            "{:<13} p = {p:<12} threshold {:<12} {verdict}{degenerate}",
            format!("{name} test"),
            fmt_num(t.threshold)
        );
    }
}

fn validate(args: ValidateArgs) -> qkdlab::Result<ExitCode> {
    let format = match args.format {
        FormatArg::Ascii => BitFormat::Ascii,
        FormatArg::Binary => BitFormat::Binary,
    };
    let thresholds = Thresholds::new(args.binomial_threshold, args.iid_threshold);
    let report = harness::validate_file(&args.input, format, &thresholds)?;
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("serializable")
        );
    } else {
        println!("source        {}", report.source_label);
        print_validation(&report);
    }
    Ok(verdict_code(report.passed()))
}

fn compare(args: CompareArgs) -> qkdlab::Result<ExitCode> {
    let comparison = harness::compare_reports(&args.reports)?;
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&comparison).expect("serializable")
        );
    } else {
        print!("{}", comparison.render_table());
    }
    Ok(ExitCode::SUCCESS)
}
