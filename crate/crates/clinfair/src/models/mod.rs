//! Weighted classifiers producing scores in [0, 1]: logistic regression with
//! an optional prejudice-remover penalty, and a random forest.

mod forest;
mod logistic;

pub use forest::{train_forest, ForestConfig, MaxFeatures, Tree, TreeNode};
pub use logistic::{prejudice_index, train_logistic, LogisticConfig, LogisticProblem};

use serde::{Deserialize, Serialize};

use crate::data::Matrix;
use crate::error::{Error, Result};

pub const MODEL_FORMAT_VERSION: u32 = 1;

/// Per-feature affine transform folded into a trained logistic model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
}

impl Standardizer {
    pub fn fit(features: &Matrix, weights: &[f64]) -> Standardizer {
        let d = features.n_cols();
        let w_total: f64 = weights.iter().sum();
        let mut means = vec![0.0; d];
        for (i, row) in features.rows().enumerate() {
            for j in 0..d {
                means[j] += weights[i] * row[j];
            }
        }
        for m in &mut means {
            *m /= w_total;
        }
        let mut vars = vec![0.0; d];
        for (i, row) in features.rows().enumerate() {
            for j in 0..d {
                let c = row[j] - means[j];
                vars[j] += weights[i] * c * c;
            }
        }
        let stds = vars
            .iter()
            .map(|v| {
                let s = (v / w_total).sqrt();
                // constant columns stay at zero after centering
                if s > 0.0 {
                    s
                } else {
                    1.0
                }
            })
            .collect();
        Standardizer { means, stds }
    }

    pub fn apply(&self, row: &[f64], out: &mut [f64]) {
        for j in 0..row.len() {
            out[j] = (row[j] - self.means[j]) / self.stds[j];
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelParams {
    Logistic {
        coefficients: Vec<f64>,
        intercept: f64,
        standardizer: Standardizer,
        /// False when gradient descent hit max_iters before the tolerance.
        converged: bool,
    },
    Forest {
        trees: Vec<Tree>,
    },
}

/// A fitted classifier. Immutable and shareable after fitting; serializes to
/// a versioned JSON document with a bit-exact round trip.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub version: u32,
    pub feature_names: Vec<String>,
    #[serde(flatten)]
    pub params: ModelParams,
}

impl TrainedModel {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<TrainedModel> {
        let model: TrainedModel = serde_json::from_str(text)?;
        if model.version != MODEL_FORMAT_VERSION {
            return Err(Error::Data(format!(
                "unsupported model format version {}",
                model.version
            )));
        }
        Ok(model)
    }
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Scores for each feature row, in [0, 1].
pub fn predict_scores(model: &TrainedModel, features: &Matrix) -> Result<Vec<f64>> {
    let expected = model.feature_names.len();
    if features.n_cols() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: features.n_cols(),
        });
    }
    match &model.params {
        ModelParams::Logistic {
            coefficients,
            intercept,
            standardizer,
            ..
        } => {
            let mut buf = vec![0.0; expected];
            Ok(features
                .rows()
                .map(|row| {
                    standardizer.apply(row, &mut buf);
                    let z: f64 = intercept
                        + coefficients.iter().zip(buf.iter()).map(|(c, x)| c * x).sum::<f64>();
                    sigmoid(z)
                })
                .collect())
        }
        ModelParams::Forest { trees } => Ok(features
            .rows()
            .map(|row| {
                let sum: f64 = trees.iter().map(|t| t.score(row)).sum();
                sum / trees.len() as f64
            })
            .collect()),
    }
}
