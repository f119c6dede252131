use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::data::LabeledDataset;
use crate::error::{Error, Result};
use crate::exec::{map_indexed, ExecMode};
use crate::models::{ModelParams, TrainedModel, MODEL_FORMAT_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaxFeatures {
    Sqrt,
    All,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForestConfig {
    pub n_trees: usize,
    pub min_samples_leaf: usize,
    pub max_features: MaxFeatures,
    pub seed: u64,
}

impl Default for ForestConfig {
    fn default() -> Self {
        ForestConfig {
            n_trees: 500,
            min_samples_leaf: 25,
            max_features: MaxFeatures::Sqrt,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum TreeNode {
    Leaf {
        /// Weighted positive rate of the training rows reaching this leaf.
        rate: f64,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// A decision tree stored as a flat node arena; index 0 is the root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub nodes: Vec<TreeNode>,
}

impl Tree {
    pub fn score(&self, row: &[f64]) -> f64 {
        let mut idx = 0;
        loop {
            match &self.nodes[idx] {
                TreeNode::Leaf { rate } => return *rate,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    idx = if row[*feature] <= *threshold { *left } else { *right };
                }
            }
        }
    }
}

struct TreeBuilder<'a> {
    ds: &'a LabeledDataset,
    min_leaf: usize,
    n_subset: usize,
    nodes: Vec<TreeNode>,
}

struct BestSplit {
    feature: usize,
    threshold: f64,
    decrease: f64,
}

fn gini(w_pos: f64, w_total: f64) -> f64 {
    if w_total <= 0.0 {
        return 0.0;
    }
    let p = w_pos / w_total;
    1.0 - p * p - (1.0 - p) * (1.0 - p)
}

impl<'a> TreeBuilder<'a> {
    /// Splits chosen by weighted Gini decrease. Ties keep the lowest feature
    /// index, then the lowest threshold (the first candidate encountered).
    fn best_split(&self, indices: &[usize], features: &[usize]) -> Option<BestSplit> {
        let weights = &self.ds.weights;
        let labels = &self.ds.labels;
        let w_total: f64 = indices.iter().map(|&i| weights[i]).sum();
        let w_pos: f64 = indices
            .iter()
            .filter(|&&i| labels[i] == 1)
            .map(|&i| weights[i])
            .sum();
        let parent_gini = gini(w_pos, w_total);
        let n = indices.len();

        let mut best: Option<BestSplit> = None;
        let mut order: Vec<usize> = Vec::with_capacity(n);
        for &feature in features {
            order.clear();
            order.extend_from_slice(indices);
            order.sort_by(|&a, &b| {
                self.ds
                    .features
                    .get(a, feature)
                    .partial_cmp(&self.ds.features.get(b, feature))
                    .unwrap()
                    .then(a.cmp(&b))
            });
            let mut left_w = 0.0;
            let mut left_pos = 0.0;
            for k in 0..n - 1 {
                let i = order[k];
                left_w += weights[i];
                if labels[i] == 1 {
                    left_pos += weights[i];
                }
                let v = self.ds.features.get(i, feature);
                let v_next = self.ds.features.get(order[k + 1], feature);
                if v == v_next {
                    continue;
                }
                let left_count = k + 1;
                let right_count = n - left_count;
                if left_count < self.min_leaf || right_count < self.min_leaf {
                    continue;
                }
                let right_w = w_total - left_w;
                let right_pos = w_pos - left_pos;
                let decrease = parent_gini
                    - (left_w / w_total) * gini(left_pos, left_w)
                    - (right_w / w_total) * gini(right_pos, right_w);
                if decrease > 1e-12 && best.as_ref().map_or(true, |b| decrease > b.decrease) {
                    best = Some(BestSplit {
                        feature,
                        threshold: 0.5 * (v + v_next),
                        decrease,
                    });
                }
            }
        }
        best
    }

    fn build(&mut self, indices: Vec<usize>, rng: &mut ChaCha12Rng) -> usize {
        let weights = &self.ds.weights;
        let labels = &self.ds.labels;
        let w_total: f64 = indices.iter().map(|&i| weights[i]).sum();
        let w_pos: f64 = indices
            .iter()
            .filter(|&&i| labels[i] == 1)
            .map(|&i| weights[i])
            .sum();
        let pure = indices.iter().all(|&i| labels[i] == labels[indices[0]]);

        if !pure && indices.len() >= 2 * self.min_leaf {
            let d = self.ds.n_features();
            let mut features: Vec<usize> = if self.n_subset >= d {
                (0..d).collect()
            } else {
                rand::seq::index::sample(rng, d, self.n_subset).into_vec()
            };
            features.sort_unstable();
            if let Some(split) = self.best_split(&indices, &features) {
                let (left_idx, right_idx): (Vec<usize>, Vec<usize>) = indices
                    .into_iter()
                    .partition(|&i| self.ds.features.get(i, split.feature) <= split.threshold);
                let node = self.nodes.len();
                self.nodes.push(TreeNode::Leaf { rate: 0.0 }); // placeholder
                let left = self.build(left_idx, rng);
                let right = self.build(right_idx, rng);
                self.nodes[node] = TreeNode::Split {
                    feature: split.feature,
                    threshold: split.threshold,
                    left,
                    right,
                };
                return node;
            }
        }

        let rate = if w_total > 0.0 { w_pos / w_total } else { 0.0 };
        self.nodes.push(TreeNode::Leaf { rate });
        self.nodes.len() - 1
    }
}

fn fit_tree(ds: &LabeledDataset, cfg: &ForestConfig, tree_index: usize) -> Tree {
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    rng.set_stream(tree_index as u64 + 1);

    // bootstrap resample with probability proportional to instance weight
    let n = ds.n_rows();
    let sampler = WeightedIndex::new(&ds.weights).expect("positive weights");
    let indices: Vec<usize> = (0..n).map(|_| sampler.sample(&mut rng)).collect();

    let d = ds.n_features();
    let n_subset = match cfg.max_features {
        MaxFeatures::All => d,
        MaxFeatures::Sqrt => (d as f64).sqrt().round().max(1.0) as usize,
    };
    let mut builder = TreeBuilder {
        ds,
        min_leaf: cfg.min_samples_leaf,
        n_subset,
        nodes: Vec::new(),
    };
    builder.build(indices, &mut rng);
    Tree {
        nodes: builder.nodes,
    }
}

/// Fits a weighted random forest. Trees derive their randomness from per-tree
/// seeded substreams, so the result is identical across execution modes.
pub fn train_forest(ds: &LabeledDataset, cfg: &ForestConfig, mode: ExecMode) -> Result<TrainedModel> {
    if cfg.n_trees == 0 || cfg.min_samples_leaf == 0 {
        return Err(Error::Config("n_trees and min_samples_leaf must be positive".into()));
    }
    if ds.labels.iter().all(|&y| y == 1) || ds.labels.iter().all(|&y| y == 0) {
        return Err(Error::SingleClass);
    }
    let trees = map_indexed(mode, cfg.n_trees, |t| fit_tree(ds, cfg, t));
    Ok(TrainedModel {
        version: MODEL_FORMAT_VERSION,
        feature_names: ds.feature_names.clone(),
        params: ModelParams::Forest { trees },
    })
}
