use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};
use crate::evaluate::experiment::{FoldResult, METRIC_NAMES};

/// Paired per-fold difference (candidate minus baseline) for one metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiffStat {
    pub mean: f64,
    pub std: f64,
    /// One-sample t statistic of the paired differences; absent when fewer
    /// than two folds contributed or the differences have zero spread.
    pub t_statistic: Option<f64>,
    pub significant: bool,
    /// Number of folds where the metric was defined in both runs.
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffSummary {
    pub alpha: f64,
    pub metrics: BTreeMap<String, DiffStat>,
}

fn diff_stat(diffs: &[f64], alpha: f64) -> DiffStat {
    let n = diffs.len();
    let mean = diffs.iter().sum::<f64>() / n as f64;
    let std = if n > 1 {
        let ss: f64 = diffs.iter().map(|d| (d - mean) * (d - mean)).sum();
        (ss / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    if n < 2 {
        return DiffStat {
            mean,
            std,
            t_statistic: None,
            significant: false,
            n,
        };
    }
    if std == 0.0 {
        // zero spread: any nonzero mean difference is exact across folds
        return DiffStat {
            mean,
            std,
            t_statistic: None,
            significant: mean != 0.0,
            n,
        };
    }
    let t = mean / (std / (n as f64).sqrt());
    let dist = StudentsT::new(0.0, 1.0, (n - 1) as f64).expect("valid t distribution");
    let critical = dist.inverse_cdf(1.0 - alpha / 2.0);
    DiffStat {
        mean,
        std,
        t_statistic: Some(t),
        significant: t.abs() > critical,
        n,
    }
}

/// Compares two runs fold by fold with a two-sided paired t-test at level
/// `alpha`. Both runs must carry the same folds over the same test-set
/// partitions; differences are `candidate - baseline`.
pub fn compare(baseline: &[FoldResult], candidate: &[FoldResult], alpha: f64) -> Result<DiffSummary> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Config("alpha must lie strictly between 0 and 1".into()));
    }
    if baseline.len() != candidate.len() {
        return Err(Error::FoldMismatch(format!(
            "fold counts differ: {} vs {}",
            baseline.len(),
            candidate.len()
        )));
    }
    if baseline.is_empty() {
        return Err(Error::FoldMismatch("no folds to compare".into()));
    }
    for (a, b) in baseline.iter().zip(candidate) {
        if a.fold_index != b.fold_index {
            return Err(Error::FoldMismatch(format!(
                "fold indices differ: {} vs {}",
                a.fold_index, b.fold_index
            )));
        }
        if a.partition_digest != b.partition_digest {
            return Err(Error::FoldMismatch(format!(
                "fold {} was evaluated on different test partitions",
                a.fold_index
            )));
        }
    }

    let mut metrics = BTreeMap::new();
    for name in METRIC_NAMES {
        let diffs: Vec<f64> = baseline
            .iter()
            .zip(candidate)
            .filter_map(|(a, b)| match (a.metric(name), b.metric(name)) {
                (Some(x), Some(y)) => Some(y - x),
                _ => None,
            })
            .collect();
        if !diffs.is_empty() {
            metrics.insert(name.to_string(), diff_stat(&diffs, alpha));
        }
    }
    Ok(DiffSummary { alpha, metrics })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fairness::{FairnessReport, PerformanceReport};

    fn fold(index: usize, digest: &str, ba: Option<f64>, spd: Option<f64>) -> FoldResult {
        FoldResult {
            fold_index: index,
            chosen_threshold: 0.5,
            n_test_rows: 10,
            partition_digest: digest.to_string(),
            performance: PerformanceReport {
                balanced_accuracy: ba,
                f1: None,
            },
            fairness: FairnessReport {
                statistical_parity_difference: spd,
                disparate_impact: None,
                disparate_impact_error: None,
                equal_opportunity_difference: None,
                average_odds_difference: None,
            },
        }
    }

    fn runs(base_ba: &[f64], cand_ba: &[f64]) -> (Vec<FoldResult>, Vec<FoldResult>) {
        let base = base_ba
            .iter()
            .enumerate()
            .map(|(i, &v)| fold(i, &format!("d{i}"), Some(v), None))
            .collect();
        let cand = cand_ba
            .iter()
            .enumerate()
            .map(|(i, &v)| fold(i, &format!("d{i}"), Some(v), None))
            .collect();
        (base, cand)
    }

    #[test]
    fn large_consistent_shift_is_significant() {
        let (base, cand) = runs(
            &[0.60, 0.62, 0.61, 0.63, 0.60],
            &[0.70, 0.71, 0.72, 0.70, 0.71],
        );
        let out = compare(&base, &cand, 0.05).unwrap();
        let stat = &out.metrics["balanced_accuracy"];
        assert!(stat.significant);
        assert!(stat.mean > 0.08);
        assert_eq!(stat.n, 5);
        // t_0.025 with 4 degrees of freedom
        assert!(stat.t_statistic.unwrap() > 2.776);
    }

    #[test]
    fn noisy_zero_mean_shift_is_not_significant() {
        let (base, cand) = runs(
            &[0.60, 0.60, 0.60, 0.60, 0.60],
            &[0.70, 0.50, 0.70, 0.50, 0.62],
        );
        let out = compare(&base, &cand, 0.05).unwrap();
        assert!(!out.metrics["balanced_accuracy"].significant);
    }

    #[test]
    fn exact_constant_shift_is_significant_without_t() {
        let (base, cand) = runs(&[0.6, 0.6, 0.6], &[0.7, 0.7, 0.7]);
        let out = compare(&base, &cand, 0.05).unwrap();
        let stat = &out.metrics["balanced_accuracy"];
        assert!(stat.significant);
        assert_eq!(stat.t_statistic, None);
    }

    #[test]
    fn undefined_metrics_reduce_pair_count() {
        let mut base = vec![
            fold(0, "d0", Some(0.6), Some(-0.1)),
            fold(1, "d1", Some(0.6), None),
        ];
        let cand = vec![
            fold(0, "d0", Some(0.7), Some(-0.05)),
            fold(1, "d1", Some(0.7), Some(-0.02)),
        ];
        base[1].fairness.statistical_parity_difference = None;
        let out = compare(&base, &cand, 0.05).unwrap();
        assert_eq!(out.metrics["statistical_parity_difference"].n, 1);
        assert_eq!(out.metrics["balanced_accuracy"].n, 2);
    }

    #[test]
    fn mismatched_partitions_are_rejected() {
        let (base, mut cand) = runs(&[0.6, 0.6], &[0.7, 0.7]);
        cand[1].partition_digest = "other".into();
        assert!(matches!(
            compare(&base, &cand, 0.05).unwrap_err(),
            Error::FoldMismatch(_)
        ));
        let (base, _) = runs(&[0.6, 0.6], &[0.7, 0.7]);
        let (_, cand) = runs(&[0.6], &[0.7]);
        assert!(matches!(
            compare(&base, &cand, 0.05).unwrap_err(),
            Error::FoldMismatch(_)
        ));
    }
}
