use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fairness::{confusion_by_group, fairness_report, performance_report, Confusion};

/// Metric values across a threshold grid; vectors are index-aligned with
/// `thresholds`. `None` marks thresholds where a metric is undefined.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCurve {
    pub thresholds: Vec<f64>,
    pub balanced_accuracy: Vec<Option<f64>>,
    pub di_error: Vec<Option<f64>>,
    pub average_odds_difference: Vec<Option<f64>>,
}

fn pooled_confusion(labels: &[u8], predictions: &[u8]) -> Confusion {
    let mut c = Confusion::default();
    for (&y, &p) in labels.iter().zip(predictions) {
        match (y, p) {
            (1, 1) => c.tp += 1.0,
            (0, 1) => c.fp += 1.0,
            (0, 0) => c.tn += 1.0,
            _ => c.fn_ += 1.0,
        }
    }
    c
}

/// Evaluates score-threshold classifications (positive when score > t) over a
/// grid. Fairness entries are all `None` when one protected group is absent;
/// balanced accuracy is still reported.
pub fn sweep(
    scores: &[f64],
    labels: &[u8],
    protected: &[u8],
    thresholds: &[f64],
) -> Result<SweepCurve> {
    let n = scores.len();
    if labels.len() != n || protected.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: labels.len().min(protected.len()),
        });
    }
    let both_groups = protected.contains(&0) && protected.contains(&1);
    let mut curve = SweepCurve {
        thresholds: thresholds.to_vec(),
        balanced_accuracy: Vec::with_capacity(thresholds.len()),
        di_error: Vec::with_capacity(thresholds.len()),
        average_odds_difference: Vec::with_capacity(thresholds.len()),
    };
    for &t in thresholds {
        let preds: Vec<u8> = scores.iter().map(|&s| u8::from(s > t)).collect();
        if both_groups {
            let conf = confusion_by_group(labels, &preds, protected, None)?;
            let fair = fairness_report(&conf);
            let perf = performance_report(&conf.pooled());
            curve.balanced_accuracy.push(perf.balanced_accuracy);
            curve.di_error.push(fair.disparate_impact_error);
            curve
                .average_odds_difference
                .push(fair.average_odds_difference);
        } else {
            let perf = performance_report(&pooled_confusion(labels, &preds));
            curve.balanced_accuracy.push(perf.balanced_accuracy);
            curve.di_error.push(None);
            curve.average_odds_difference.push(None);
        }
    }
    Ok(curve)
}

/// The threshold maximizing balanced accuracy; ties resolve to the smallest
/// threshold. Errors when balanced accuracy is undefined everywhere.
pub fn select_threshold(curve: &SweepCurve) -> Result<f64> {
    let mut best: Option<(f64, f64)> = None;
    for (i, &t) in curve.thresholds.iter().enumerate() {
        if let Some(ba) = curve.balanced_accuracy[i] {
            match best {
                Some((_, b)) if ba <= b => {}
                _ => best = Some((t, ba)),
            }
        }
    }
    best.map(|(t, _)| t)
        .ok_or_else(|| Error::Data("balanced accuracy undefined at every threshold".into()))
}
