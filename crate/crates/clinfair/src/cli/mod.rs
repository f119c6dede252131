//! Command-line pipeline: synthesize raw tables, assemble features, run
//! cross-validated experiments, compare runs, and render reports.

mod io;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::exec::ExecMode;

pub use io::{read_folds_csv, write_folds_csv};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExecArg {
    Sequential,
    Parallel,
}

impl From<ExecArg> for ExecMode {
    fn from(arg: ExecArg) -> ExecMode {
        match arg {
            ExecArg::Sequential => ExecMode::Sequential,
            ExecArg::Parallel => ExecMode::Parallel,
        }
    }
}

fn default_exec_arg() -> ExecArg {
    match ExecMode::default() {
        ExecMode::Sequential => ExecArg::Sequential,
        ExecMode::Parallel => ExecArg::Parallel,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "clinfair",
    version,
    about = "Fairness-aware prediction of future benzodiazepine administration"
)]
pub struct Cli {
    /// Execution mode for data-parallel stages.
    #[arg(long, global = true, value_enum, default_value_t = default_exec_arg())]
    pub exec: ExecArg,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Generator settings as JSON; omitted fields use defaults.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory for the five raw CSV tables.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct FeaturizeArgs {
    /// Directory holding the five raw CSV tables.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Drop the admission-duration column from the feature table.
    #[arg(long)]
    pub drop_duration: bool,
    /// Ignore diagnoses whose diagnosis date had to be substituted.
    #[arg(long)]
    pub primary_dates_only: bool,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Assembled feature table (features.csv from `featurize`).
    #[arg(long)]
    pub features: PathBuf,
    /// Experiment settings as JSON; omitted fields use defaults.
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Run directory of the baseline (output of `evaluate`).
    #[arg(long)]
    pub baseline: PathBuf,
    /// Run directory of the candidate.
    #[arg(long)]
    pub candidate: PathBuf,
    /// Output JSON file.
    #[arg(long)]
    pub out: PathBuf,
    /// Significance level of the paired t-test.
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long)]
    pub out: PathBuf,
    /// Run to include, as NAME=RUN_DIR; repeatable.
    #[arg(long = "run", value_parser = parse_named_dir, required = true)]
    pub runs: Vec<(String, PathBuf)>,
    /// Paired comparison to include, as BASELINE_NAME,CANDIDATE_NAME;
    /// repeatable, names must match --run entries.
    #[arg(long = "compare", value_parser = parse_name_pair)]
    pub compares: Vec<(String, String)>,
    /// Significance level of the paired t-tests.
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic raw EHR bundle.
    Synth(SynthArgs),
    /// Assemble the per-admission feature table from raw tables.
    Featurize(FeaturizeArgs),
    /// Run one cross-validated experiment on a feature table.
    Evaluate(EvaluateArgs),
    /// Compare two runs fold by fold with a paired t-test.
    Compare(CompareArgs),
    /// Render a markdown report with threshold-sweep charts.
    Report(ReportArgs),
}

fn parse_named_dir(text: &str) -> std::result::Result<(String, PathBuf), String> {
    match text.split_once('=') {
        Some((name, dir)) if !name.is_empty() && !dir.is_empty() => {
            Ok((name.to_string(), PathBuf::from(dir)))
        }
        _ => Err(format!("expected NAME=DIR, got {text:?}")),
    }
}

fn parse_name_pair(text: &str) -> std::result::Result<(String, String), String> {
    match text.split_once(',') {
        Some((a, b)) if !a.is_empty() && !b.is_empty() => Ok((a.to_string(), b.to_string())),
        _ => Err(format!("expected BASELINE,CANDIDATE, got {text:?}")),
    }
}

pub fn run(cli: Cli) -> Result<()> {
    let mode = cli.exec.into();
    match cli.command {
        Command::Synth(args) => io::run_synth(&args),
        Command::Featurize(args) => io::run_featurize(&args),
        Command::Evaluate(args) => io::run_evaluate(&args, mode),
        Command::Compare(args) => io::run_compare(&args),
        Command::Report(args) => io::run_report(&args),
    }
}

/// Process exit code for an error: 2 for usage or configuration problems,
/// 3 for data problems.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) => 2,
        _ => 3,
    }
}
