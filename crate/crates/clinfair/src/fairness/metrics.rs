use serde::{Deserialize, Serialize};

use crate::fairness::confusion::{Confusion, GroupConfusion};

/// Fairness metric vector. `None` marks a metric whose defining rate has a
/// zero denominator; aggregation skips such values.
///
/// Sign convention: negative SPD/EOD/AOD (and DI below 1) mean the privileged
/// group has the advantage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FairnessReport {
    pub statistical_parity_difference: Option<f64>,
    pub disparate_impact: Option<f64>,
    pub disparate_impact_error: Option<f64>,
    pub equal_opportunity_difference: Option<f64>,
    pub average_odds_difference: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerformanceReport {
    pub balanced_accuracy: Option<f64>,
    pub f1: Option<f64>,
}

/// Disparate impact error: distance of DI from its ideal value of 1.
pub fn di_error(di: f64) -> f64 {
    1.0 - di.min(1.0 / di)
}

pub fn fairness_report(conf: &GroupConfusion) -> FairnessReport {
    let sr_p = conf.privileged.selection_rate();
    let sr_u = conf.unprivileged.selection_rate();
    let spd = match (sr_u, sr_p) {
        (Some(u), Some(p)) => Some(u - p),
        _ => None,
    };
    let di = match (sr_u, sr_p) {
        (Some(u), Some(p)) if p > 0.0 => Some(u / p),
        _ => None,
    };
    let tpr_p = conf.privileged.tpr();
    let tpr_u = conf.unprivileged.tpr();
    let eod = match (tpr_u, tpr_p) {
        (Some(u), Some(p)) => Some(u - p),
        _ => None,
    };
    let fpr_p = conf.privileged.fpr();
    let fpr_u = conf.unprivileged.fpr();
    let aod = match (fpr_u, fpr_p, eod) {
        (Some(fu), Some(fp), Some(de)) => Some(0.5 * ((fu - fp) + de)),
        _ => None,
    };
    FairnessReport {
        statistical_parity_difference: spd,
        disparate_impact: di,
        disparate_impact_error: di.map(di_error),
        equal_opportunity_difference: eod,
        average_odds_difference: aod,
    }
}

/// Balanced accuracy and F1 on counts pooled over both groups.
pub fn performance_report(pooled: &Confusion) -> PerformanceReport {
    let balanced_accuracy = match (pooled.tpr(), pooled.tnr()) {
        (Some(tpr), Some(tnr)) => Some(0.5 * (tpr + tnr)),
        _ => None,
    };
    let denom = 2.0 * pooled.tp + pooled.fp + pooled.fn_;
    let f1 = (denom > 0.0).then(|| 2.0 * pooled.tp / denom);
    PerformanceReport {
        balanced_accuracy,
        f1,
    }
}
