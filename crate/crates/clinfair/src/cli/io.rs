use std::collections::BTreeMap;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cli::{CompareArgs, EvaluateArgs, FeaturizeArgs, ReportArgs, SynthArgs};
use crate::data::{binarize_column, to_labeled, Cell, Table};
use crate::error::{Error, Result};
use crate::evaluate::{
    compare, run_experiment, CvSummary, ExperimentConfig, FoldResult, SweepCurve,
};
use crate::exec::ExecMode;
use crate::fairness::{FairnessReport, PerformanceReport};
use crate::featurize::{assemble, feature_schema, AssembleOptions, DoseTable, COL_FUTURE_DOSE};
use crate::report::{fold_chart, render_report, ComparisonEntry, RunEntry, SecondaryMetric};
use crate::synth::bundle::{COL_DURATION_DAYS, COL_GENDER, COL_PATIENT_ID};
use crate::synth::{generate, summarize, RawEhrBundle, SynthConfig};

const MANIFEST_VERSION: u32 = 1;

/// Digest inventory of one output directory; always written last, so its
/// presence marks a complete run.
#[derive(Debug, Serialize, Deserialize)]
struct Manifest {
    format_version: u32,
    command: String,
    /// File name to SHA-256 hex digest.
    files: BTreeMap<String, String>,
}

fn sha256_hex(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path)?;
    let digest = Sha256::digest(&bytes);
    Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
}

fn write_manifest(dir: &Path, command: &str, files: &[String]) -> Result<()> {
    let mut manifest = Manifest {
        format_version: MANIFEST_VERSION,
        command: command.to_string(),
        files: BTreeMap::new(),
    };
    for file in files {
        manifest.files.insert(file.clone(), sha256_hex(&dir.join(file))?);
    }
    write_json(&dir.join("manifest.json"), &manifest)
}

fn read_config<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(std::fs::write(path, text)?)
}

pub(crate) fn run_synth(args: &SynthArgs) -> Result<()> {
    let cfg: SynthConfig = read_config(&args.config)?;
    let bundle = generate(&cfg)?;
    std::fs::create_dir_all(&args.out)?;
    bundle.write_dir(&args.out)?;
    write_json(&args.out.join("config.json"), &cfg)?;
    let summary = summarize(&bundle)?;
    println!("{}", serde_json::to_string(&summary)?);
    write_manifest(
        &args.out,
        "synth",
        &[
            "admissions.csv".into(),
            "medication.csv".into(),
            "diagnoses.csv".into(),
            "aggression.csv".into(),
            "patient.csv".into(),
            "config.json".into(),
        ],
    )
}

pub(crate) fn run_featurize(args: &FeaturizeArgs) -> Result<()> {
    let bundle = RawEhrBundle::load_dir(&args.input)?;
    let opts = AssembleOptions {
        drop_duration: args.drop_duration,
        primary_dates_only: args.primary_dates_only,
    };
    let assembled = assemble(&bundle, &DoseTable::standard(), &opts)?;
    std::fs::create_dir_all(&args.out)?;
    assembled.features.write_csv(args.out.join("features.csv"))?;
    write_json(&args.out.join("provenance.json"), &assembled.provenance)?;
    write_manifest(
        &args.out,
        "featurize",
        &["features.csv".into(), "provenance.json".into()],
    )
}

/// Loads a feature table written by `featurize`, inferring from the header
/// whether the duration column was dropped.
fn load_features(path: &Path) -> Result<Table> {
    let mut reader = csv::Reader::from_path(path)?;
    let has_duration = reader
        .headers()?
        .iter()
        .any(|name| name == COL_DURATION_DAYS);
    Table::load_csv(path, "features", feature_schema(!has_duration))
}

/// What `evaluate` stores in summary.json.
#[derive(Debug, Serialize, Deserialize)]
struct EvalSummaryFile {
    config: ExperimentConfig,
    summary: CvSummary,
    warnings: Vec<String>,
}

fn opt_field(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

fn parse_opt(text: &str, column: &str, row: usize) -> Result<Option<f64>> {
    if text.is_empty() {
        return Ok(None);
    }
    text.parse()
        .map(Some)
        .map_err(|_| Error::BadCell {
            row,
            column: column.to_string(),
            text: text.to_string(),
            reason: "not a number".to_string(),
        })
}

const FOLD_COLUMNS: [&str; 11] = [
    "fold_index",
    "chosen_threshold",
    "n_test_rows",
    "partition_digest",
    "balanced_accuracy",
    "f1",
    "statistical_parity_difference",
    "disparate_impact",
    "disparate_impact_error",
    "equal_opportunity_difference",
    "average_odds_difference",
];

pub fn write_folds_csv(path: &Path, folds: &[FoldResult]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(FOLD_COLUMNS)?;
    for f in folds {
        writer.write_record([
            f.fold_index.to_string(),
            f.chosen_threshold.to_string(),
            f.n_test_rows.to_string(),
            f.partition_digest.clone(),
            opt_field(f.performance.balanced_accuracy),
            opt_field(f.performance.f1),
            opt_field(f.fairness.statistical_parity_difference),
            opt_field(f.fairness.disparate_impact),
            opt_field(f.fairness.disparate_impact_error),
            opt_field(f.fairness.equal_opportunity_difference),
            opt_field(f.fairness.average_odds_difference),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_folds_csv(path: &Path) -> Result<Vec<FoldResult>> {
    let mut reader = csv::Reader::from_path(path)?;
    let header: Vec<String> = reader.headers()?.iter().map(String::from).collect();
    if header != FOLD_COLUMNS {
        return Err(Error::HeaderMismatch {
            path: path.display().to_string(),
            expected: FOLD_COLUMNS.iter().map(|s| s.to_string()).collect(),
            found: header,
        });
    }
    let mut folds = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let row = i + 1;
        let bad = |column: &str, text: &str| Error::BadCell {
            row,
            column: column.to_string(),
            text: text.to_string(),
            reason: "not a number".to_string(),
        };
        folds.push(FoldResult {
            fold_index: record[0].parse().map_err(|_| bad("fold_index", &record[0]))?,
            chosen_threshold: record[1]
                .parse()
                .map_err(|_| bad("chosen_threshold", &record[1]))?,
            n_test_rows: record[2].parse().map_err(|_| bad("n_test_rows", &record[2]))?,
            partition_digest: record[3].to_string(),
            performance: PerformanceReport {
                balanced_accuracy: parse_opt(&record[4], "balanced_accuracy", row)?,
                f1: parse_opt(&record[5], "f1", row)?,
            },
            fairness: FairnessReport {
                statistical_parity_difference: parse_opt(
                    &record[6],
                    "statistical_parity_difference",
                    row,
                )?,
                disparate_impact: parse_opt(&record[7], "disparate_impact", row)?,
                disparate_impact_error: parse_opt(&record[8], "disparate_impact_error", row)?,
                equal_opportunity_difference: parse_opt(
                    &record[9],
                    "equal_opportunity_difference",
                    row,
                )?,
                average_odds_difference: parse_opt(&record[10], "average_odds_difference", row)?,
            },
        });
    }
    Ok(folds)
}

const CURVE_COLUMNS: [&str; 4] = [
    "threshold",
    "balanced_accuracy",
    "disparate_impact_error",
    "average_odds_difference",
];

fn write_curve_csv(path: &Path, curve: &SweepCurve) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(CURVE_COLUMNS)?;
    for i in 0..curve.thresholds.len() {
        writer.write_record([
            curve.thresholds[i].to_string(),
            opt_field(curve.balanced_accuracy[i]),
            opt_field(curve.di_error[i]),
            opt_field(curve.average_odds_difference[i]),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

fn read_curve_csv(path: &Path) -> Result<SweepCurve> {
    let mut reader = csv::Reader::from_path(path)?;
    let header: Vec<String> = reader.headers()?.iter().map(String::from).collect();
    if header != CURVE_COLUMNS {
        return Err(Error::HeaderMismatch {
            path: path.display().to_string(),
            expected: CURVE_COLUMNS.iter().map(|s| s.to_string()).collect(),
            found: header,
        });
    }
    let mut curve = SweepCurve {
        thresholds: Vec::new(),
        balanced_accuracy: Vec::new(),
        di_error: Vec::new(),
        average_odds_difference: Vec::new(),
    };
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let row = i + 1;
        curve.thresholds.push(record[0].parse().map_err(|_| Error::BadCell {
            row,
            column: "threshold".into(),
            text: record[0].to_string(),
            reason: "not a number".into(),
        })?);
        curve
            .balanced_accuracy
            .push(parse_opt(&record[1], "balanced_accuracy", row)?);
        curve
            .di_error
            .push(parse_opt(&record[2], "disparate_impact_error", row)?);
        curve
            .average_odds_difference
            .push(parse_opt(&record[3], "average_odds_difference", row)?);
    }
    Ok(curve)
}

pub(crate) fn run_evaluate(args: &EvaluateArgs, mode: ExecMode) -> Result<()> {
    let cfg: ExperimentConfig = read_config(&args.config)?;
    cfg.validate()?;
    let features = load_features(&args.features)?;
    let binary = binarize_column(&features, COL_FUTURE_DOSE, |dose| dose > 0.0)?;
    let ds = to_labeled(
        &binary,
        COL_FUTURE_DOSE,
        COL_GENDER,
        COL_PATIENT_ID,
        &Cell::Bool(true),
        &Cell::Bool(true),
    )?;

    let output = run_experiment(&ds, &cfg, mode)?;

    std::fs::create_dir_all(args.out.join("curves"))?;
    write_folds_csv(&args.out.join("folds.csv"), &output.folds)?;
    let mut files = vec!["folds.csv".to_string(), "summary.json".to_string()];
    for (fold, curve) in output.folds.iter().zip(&output.curves) {
        let name = format!("curves/fold_{}.csv", fold.fold_index);
        write_curve_csv(&args.out.join(&name), curve)?;
        files.push(name);
    }
    write_json(
        &args.out.join("summary.json"),
        &EvalSummaryFile {
            config: output.config,
            summary: output.summary,
            warnings: output.warnings,
        },
    )?;
    write_manifest(&args.out, "evaluate", &files)
}

pub(crate) fn run_compare(args: &CompareArgs) -> Result<()> {
    let baseline = read_folds_csv(&args.baseline.join("folds.csv"))?;
    let candidate = read_folds_csv(&args.candidate.join("folds.csv"))?;
    let diff = compare(&baseline, &candidate, args.alpha)?;
    if let Some(parent) = args.out.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    write_json(&args.out, &diff)
}

struct LoadedRun {
    name: String,
    summary: EvalSummaryFile,
    folds: Vec<FoldResult>,
    curves: Vec<SweepCurve>,
}

fn load_run(name: &str, dir: &Path) -> Result<LoadedRun> {
    let summary: EvalSummaryFile = {
        let text = std::fs::read_to_string(dir.join("summary.json"))?;
        serde_json::from_str(&text)?
    };
    let folds = read_folds_csv(&dir.join("folds.csv"))?;
    let curves = folds
        .iter()
        .map(|f| read_curve_csv(&dir.join(format!("curves/fold_{}.csv", f.fold_index))))
        .collect::<Result<Vec<_>>>()?;
    Ok(LoadedRun {
        name: name.to_string(),
        summary,
        folds,
        curves,
    })
}

pub(crate) fn run_report(args: &ReportArgs) -> Result<()> {
    let mut runs = Vec::new();
    for (name, dir) in &args.runs {
        runs.push(load_run(name, dir)?);
    }
    let find = |name: &str| -> Result<&LoadedRun> {
        runs.iter()
            .find(|r| r.name == name)
            .ok_or_else(|| Error::Config(format!("--compare references unknown run {name:?}")))
    };

    let mut comparisons = Vec::new();
    for (base_name, cand_name) in &args.compares {
        let base = find(base_name)?;
        let cand = find(cand_name)?;
        comparisons.push(ComparisonEntry {
            baseline: base.name.clone(),
            candidate: cand.name.clone(),
            diff: compare(&base.folds, &cand.folds, args.alpha)?,
        });
    }

    std::fs::create_dir_all(&args.out)?;
    let mut files = vec!["report.md".to_string()];
    for run in &runs {
        for (fold, curve) in run.folds.iter().zip(&run.curves) {
            for (suffix, secondary) in [
                ("di_error", SecondaryMetric::DiError),
                ("aod", SecondaryMetric::AverageOddsDifference),
            ] {
                let name = format!("{}_fold_{}_{}.svg", run.name, fold.fold_index, suffix);
                let svg = fold_chart(curve, fold.chosen_threshold, secondary);
                std::fs::write(args.out.join(&name), svg)?;
                files.push(name);
            }
        }
    }

    let entries: Vec<RunEntry> = runs
        .iter()
        .map(|r| RunEntry {
            name: r.name.clone(),
            summary: r.summary.summary.clone(),
        })
        .collect();
    std::fs::write(args.out.join("report.md"), render_report(&entries, &comparisons))?;
    write_manifest(&args.out, "report", &files)
}
