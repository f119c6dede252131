use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::data::{partition_indices, LabeledDataset};
use crate::error::{Error, Result};
use crate::evaluate::sweep::{select_threshold, sweep, SweepCurve};
use crate::evaluate::{Classifier, ExperimentConfig, Mitigation};
use crate::exec::{map_indexed, ExecMode};
use crate::fairness::{
    confusion_by_group, fairness_report, performance_report, reweigh, FairnessReport,
    PerformanceReport,
};
use crate::models::{predict_scores, train_forest, train_logistic, TrainedModel};

/// Canonical metric names used in summaries, comparisons and reports.
pub const METRIC_NAMES: [&str; 7] = [
    "balanced_accuracy",
    "f1",
    "statistical_parity_difference",
    "disparate_impact",
    "disparate_impact_error",
    "equal_opportunity_difference",
    "average_odds_difference",
];

/// Test-set outcome of one cross-validation fold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    pub fold_index: usize,
    pub chosen_threshold: f64,
    pub n_test_rows: usize,
    /// Digest of the sorted test-set group ids; lets two runs prove they used
    /// the same partitions before being compared fold by fold.
    pub partition_digest: String,
    pub performance: PerformanceReport,
    pub fairness: FairnessReport,
}

impl FoldResult {
    pub fn metric(&self, name: &str) -> Option<f64> {
        match name {
            "balanced_accuracy" => self.performance.balanced_accuracy,
            "f1" => self.performance.f1,
            "statistical_parity_difference" => self.fairness.statistical_parity_difference,
            "disparate_impact" => self.fairness.disparate_impact,
            "disparate_impact_error" => self.fairness.disparate_impact_error,
            "equal_opportunity_difference" => self.fairness.equal_opportunity_difference,
            "average_odds_difference" => self.fairness.average_odds_difference,
            "chosen_threshold" => Some(self.chosen_threshold),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanStd {
    pub mean: f64,
    /// Sample standard deviation (zero when only one value contributed).
    pub std: f64,
    /// Number of folds where the metric was defined.
    pub n: usize,
}

pub fn mean_std(values: &[f64]) -> Option<MeanStd> {
    if values.is_empty() {
        return None;
    }
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let std = if n > 1 {
        let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
        (ss / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    Some(MeanStd { mean, std, n })
}

/// Per-metric mean and spread across the completed folds; metrics undefined
/// in a fold are skipped for that fold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvSummary {
    pub n_folds: usize,
    pub metrics: BTreeMap<String, MeanStd>,
}

pub fn summarize_folds(folds: &[FoldResult]) -> CvSummary {
    let mut metrics = BTreeMap::new();
    for name in METRIC_NAMES.iter().copied().chain(["chosen_threshold"]) {
        let values: Vec<f64> = folds.iter().filter_map(|f| f.metric(name)).collect();
        if let Some(ms) = mean_std(&values) {
            metrics.insert(name.to_string(), ms);
        }
    }
    CvSummary {
        n_folds: folds.len(),
        metrics,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentOutput {
    pub config: ExperimentConfig,
    pub folds: Vec<FoldResult>,
    /// Validation-sweep curve of each completed fold, aligned with `folds`.
    pub curves: Vec<SweepCurve>,
    pub summary: CvSummary,
    /// One entry per skipped fold, explaining why.
    pub warnings: Vec<String>,
}

fn partition_digest(group_ids: &[String]) -> String {
    let mut distinct: Vec<&str> = group_ids.iter().map(String::as_str).collect();
    distinct.sort_unstable();
    distinct.dedup();
    let mut hasher = Sha256::new();
    for g in distinct {
        hasher.update(g.as_bytes());
        hasher.update([0u8]);
    }
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn stage_seed(base: u64, fold: usize, stage: u64) -> u64 {
    base ^ (fold as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ stage.wrapping_mul(0xD1B5_4A32_D192_ED03)
}

/// Degenerate data conditions that invalidate one fold but not the run.
fn is_fold_degenerate(err: &Error) -> bool {
    matches!(
        err,
        Error::SingleClass
            | Error::EmptyGroup(_)
            | Error::EmptyCell { .. }
            | Error::TooFewGroups { .. }
    )
}

fn apply_mitigation(ds: &LabeledDataset, mitigation: &Mitigation) -> Result<LabeledDataset> {
    match mitigation {
        Mitigation::Reweigh => {
            let w = reweigh(ds)?;
            ds.with_weights(w)
        }
        _ => Ok(ds.clone()),
    }
}

fn train(
    ds: &LabeledDataset,
    cfg: &ExperimentConfig,
    fold: usize,
    stage: u64,
) -> Result<TrainedModel> {
    match cfg.classifier {
        Classifier::Logistic => {
            let mut lc = cfg.logistic.clone();
            if let Mitigation::Prejudice { eta } = cfg.mitigation {
                lc.eta = eta;
            }
            train_logistic(ds, &lc)
        }
        Classifier::Forest => {
            let mut fc = cfg.forest.clone();
            fc.seed = stage_seed(cfg.seed ^ cfg.forest.seed, fold, stage);
            // trees of one forest already parallelize; folds run sequentially
            // inside, keeping nesting shallow
            train_forest(ds, &fc, ExecMode::Sequential)
        }
    }
}

enum FoldOutcome {
    Done(Box<(FoldResult, SweepCurve)>),
    Skipped(String),
}

fn run_fold(
    ds: &LabeledDataset,
    parts: &[Vec<usize>],
    fold: usize,
    cfg: &ExperimentConfig,
) -> Result<FoldOutcome> {
    let skip = |reason: String| Ok(FoldOutcome::Skipped(format!("fold {fold}: {reason}")));

    let test = ds.select(&parts[fold]);
    let mut dev_idx: Vec<usize> = parts
        .iter()
        .enumerate()
        .filter(|(p, _)| *p != fold)
        .flat_map(|(_, idx)| idx.iter().copied())
        .collect();
    dev_idx.sort_unstable();
    let dev = ds.select(&dev_idx);

    let inner = match partition_indices(
        &dev.group_ids,
        &[cfg.inner_train_fraction, 1.0 - cfg.inner_train_fraction],
        stage_seed(cfg.seed, fold, 7),
    ) {
        Ok(inner) => inner,
        Err(e) if is_fold_degenerate(&e) => return skip(e.to_string()),
        Err(e) => return Err(e),
    };
    let train_set = dev.select(&inner[0]);
    let valid_set = dev.select(&inner[1]);

    macro_rules! try_fold {
        ($expr:expr) => {
            match $expr {
                Ok(v) => v,
                Err(e) if is_fold_degenerate(&e) => return skip(e.to_string()),
                Err(e) => return Err(e),
            }
        };
    }

    let train_mitigated = try_fold!(apply_mitigation(&train_set, &cfg.mitigation));
    let threshold_model = try_fold!(train(&train_mitigated, cfg, fold, 0));
    let valid_scores = predict_scores(&threshold_model, &valid_set.features)?;
    let curve = sweep(
        &valid_scores,
        &valid_set.labels,
        &valid_set.protected,
        &cfg.threshold_grid,
    )?;
    let threshold = match select_threshold(&curve) {
        Ok(t) => t,
        Err(_) => return skip("balanced accuracy undefined on the validation set".into()),
    };

    let dev_mitigated = try_fold!(apply_mitigation(&dev, &cfg.mitigation));
    let final_model = try_fold!(train(&dev_mitigated, cfg, fold, 1));
    let test_scores = predict_scores(&final_model, &test.features)?;
    let preds: Vec<u8> = test_scores.iter().map(|&s| u8::from(s > threshold)).collect();
    // test metrics always use unit weights, regardless of mitigation
    let conf = try_fold!(confusion_by_group(
        &test.labels,
        &preds,
        &test.protected,
        None
    ));

    let result = FoldResult {
        fold_index: fold,
        chosen_threshold: threshold,
        n_test_rows: test.n_rows(),
        partition_digest: partition_digest(&test.group_ids),
        performance: performance_report(&conf.pooled()),
        fairness: fairness_report(&conf),
    };
    Ok(FoldOutcome::Done(Box::new((result, curve))))
}

/// Runs the full grouped cross-validation protocol.
///
/// Rows sharing a group id never cross the development/test boundary or the
/// inner train/validation boundary. The classification threshold is picked on
/// the validation split by balanced accuracy, then the model is refit on the
/// whole development set and scored on the held-out test fold. Deterministic
/// for a fixed config in both execution modes.
pub fn run_experiment(
    ds: &LabeledDataset,
    cfg: &ExperimentConfig,
    mode: ExecMode,
) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let fractions = vec![1.0 / cfg.k_folds as f64; cfg.k_folds];
    let parts = partition_indices(&ds.group_ids, &fractions, cfg.seed)?;

    let outcomes = map_indexed(mode, cfg.k_folds, |fold| {
        run_fold(ds, &parts, fold, cfg)
    });

    let mut folds = Vec::new();
    let mut curves = Vec::new();
    let mut warnings = Vec::new();
    for outcome in outcomes {
        match outcome? {
            FoldOutcome::Done(boxed) => {
                let (result, curve) = *boxed;
                folds.push(result);
                curves.push(curve);
            }
            FoldOutcome::Skipped(reason) => {
                eprintln!("warning: skipping {reason}");
                warnings.push(reason);
            }
        }
    }

    let summary = summarize_folds(&folds);
    Ok(ExperimentOutput {
        config: cfg.clone(),
        folds,
        curves,
        summary,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Matrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    /// Two-admission patients with one informative feature and a mild
    /// group-correlated nuisance feature.
    fn toy_dataset(n_patients: usize, seed: u64) -> LabeledDataset {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        let mut protected = Vec::new();
        let mut groups = Vec::new();
        for p in 0..n_patients {
            let s = u8::from(rng.gen_bool(0.5));
            for _ in 0..2 {
                let y = u8::from(rng.gen_bool(0.5));
                let x0 = y as f64 + rng.gen_range(-0.8..0.8);
                let x1 = s as f64 * 0.5 + rng.gen_range(-1.0..1.0);
                rows.push(vec![x0, x1]);
                labels.push(y);
                protected.push(s);
                groups.push(format!("P{p:04}"));
            }
        }
        let n = labels.len();
        LabeledDataset::new(
            Matrix::from_rows(rows, 2).unwrap(),
            vec!["signal".into(), "noise".into()],
            labels,
            protected,
            vec![1.0; n],
            groups,
        )
        .unwrap()
    }

    fn quick_config(classifier: Classifier, mitigation: Mitigation) -> ExperimentConfig {
        ExperimentConfig {
            classifier,
            mitigation,
            k_folds: 4,
            seed: 11,
            forest: crate::models::ForestConfig {
                n_trees: 20,
                min_samples_leaf: 5,
                ..Default::default()
            },
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn logistic_run_completes_all_folds() {
        let ds = toy_dataset(60, 1);
        let cfg = quick_config(Classifier::Logistic, Mitigation::None);
        let out = run_experiment(&ds, &cfg, ExecMode::Sequential).unwrap();
        assert_eq!(out.folds.len(), 4);
        assert_eq!(out.curves.len(), 4);
        assert!(out.warnings.is_empty());
        for f in &out.folds {
            assert!(cfg.threshold_grid.contains(&f.chosen_threshold));
            assert!(f.performance.balanced_accuracy.unwrap() > 0.5);
        }
        let ba = &out.summary.metrics["balanced_accuracy"];
        assert_eq!(ba.n, 4);
        assert!(ba.mean > 0.5);
    }

    #[test]
    fn test_partitions_are_group_disjoint() {
        let ds = toy_dataset(40, 2);
        let cfg = quick_config(Classifier::Logistic, Mitigation::None);
        let out = run_experiment(&ds, &cfg, ExecMode::Sequential).unwrap();
        let digests: std::collections::HashSet<_> =
            out.folds.iter().map(|f| f.partition_digest.clone()).collect();
        assert_eq!(digests.len(), out.folds.len());
        let total_rows: usize = out.folds.iter().map(|f| f.n_test_rows).sum();
        assert_eq!(total_rows, ds.n_rows());
    }

    #[test]
    fn deterministic_across_runs_and_modes() {
        let ds = toy_dataset(40, 3);
        let cfg = quick_config(Classifier::Forest, Mitigation::Reweigh);
        let a = run_experiment(&ds, &cfg, ExecMode::Sequential).unwrap();
        let b = run_experiment(&ds, &cfg, ExecMode::Sequential).unwrap();
        let c = run_experiment(&ds, &cfg, ExecMode::Parallel).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn prejudice_zero_matches_unmitigated() {
        let ds = toy_dataset(50, 4);
        let base = quick_config(Classifier::Logistic, Mitigation::None);
        let pr0 = quick_config(Classifier::Logistic, Mitigation::Prejudice { eta: 0.0 });
        let a = run_experiment(&ds, &base, ExecMode::Sequential).unwrap();
        let b = run_experiment(&ds, &pr0, ExecMode::Sequential).unwrap();
        for (fa, fb) in a.folds.iter().zip(&b.folds) {
            assert_eq!(fa.chosen_threshold, fb.chosen_threshold);
            for name in METRIC_NAMES {
                match (fa.metric(name), fb.metric(name)) {
                    (Some(x), Some(y)) => assert!((x - y).abs() < 1e-6, "{name}: {x} vs {y}"),
                    (x, y) => assert_eq!(x, y),
                }
            }
        }
    }

    #[test]
    fn single_class_data_skips_every_fold() {
        let mut ds = toy_dataset(30, 5);
        ds.labels.iter_mut().for_each(|y| *y = 1);
        let cfg = quick_config(Classifier::Logistic, Mitigation::None);
        let out = run_experiment(&ds, &cfg, ExecMode::Sequential).unwrap();
        assert!(out.folds.is_empty());
        assert_eq!(out.warnings.len(), 4);
        assert!(out.summary.metrics.is_empty());
    }

    #[test]
    fn mean_std_matches_hand_calc() {
        let ms = mean_std(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(ms.mean, 2.5);
        assert!((ms.std - (5.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert_eq!(mean_std(&[2.0]).unwrap().std, 0.0);
        assert!(mean_std(&[]).is_none());
    }
}
