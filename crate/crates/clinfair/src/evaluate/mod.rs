//! Grouped cross-validation protocol: threshold sweeps on an inner validation
//! split, per-fold test metrics, aggregation, and paired run comparison.

mod compare;
mod experiment;
mod sweep;

pub use compare::{compare, DiffStat, DiffSummary};
pub use experiment::{
    run_experiment, CvSummary, ExperimentOutput, FoldResult, MeanStd, METRIC_NAMES,
};
pub use sweep::{select_threshold, sweep, SweepCurve};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{ForestConfig, LogisticConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classifier {
    Logistic,
    Forest,
}

/// Bias mitigation applied inside each fold, on training rows only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mitigation {
    None,
    Reweigh,
    Prejudice { eta: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub classifier: Classifier,
    pub mitigation: Mitigation,
    pub k_folds: usize,
    /// Share of each development set used for training; the rest is the
    /// validation set driving threshold selection.
    pub inner_train_fraction: f64,
    pub threshold_grid: Vec<f64>,
    pub seed: u64,
    pub logistic: LogisticConfig,
    pub forest: ForestConfig,
}

/// 99 equally spaced candidate thresholds from 0.01 to 0.99.
pub fn default_threshold_grid() -> Vec<f64> {
    (1..=99).map(|i| i as f64 / 100.0).collect()
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            classifier: Classifier::Logistic,
            mitigation: Mitigation::None,
            k_folds: 5,
            inner_train_fraction: 0.625,
            threshold_grid: default_threshold_grid(),
            seed: 0,
            logistic: LogisticConfig::default(),
            forest: ForestConfig::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k_folds < 2 {
            return Err(Error::Config("k_folds must be at least 2".into()));
        }
        if !(self.inner_train_fraction > 0.0 && self.inner_train_fraction < 1.0) {
            return Err(Error::Config(
                "inner_train_fraction must lie strictly between 0 and 1".into(),
            ));
        }
        if self.threshold_grid.is_empty() {
            return Err(Error::Config("threshold_grid must not be empty".into()));
        }
        for w in self.threshold_grid.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::Config(
                    "threshold_grid must be strictly increasing".into(),
                ));
            }
        }
        if self
            .threshold_grid
            .iter()
            .any(|&t| !(t > 0.0 && t < 1.0))
        {
            return Err(Error::Config(
                "thresholds must lie strictly between 0 and 1".into(),
            ));
        }
        if matches!(self.mitigation, Mitigation::Prejudice { .. })
            && self.classifier == Classifier::Forest
        {
            return Err(Error::Config(
                "the prejudice penalty applies to the logistic classifier only".into(),
            ));
        }
        if let Mitigation::Prejudice { eta } = self.mitigation {
            if eta < 0.0 {
                return Err(Error::Config("eta must be >= 0".into()));
            }
        }
        Ok(())
    }
}
