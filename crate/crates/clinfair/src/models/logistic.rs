use crate::data::{LabeledDataset, Matrix};
use crate::error::{Error, Result};
use crate::models::{sigmoid, ModelParams, Standardizer, TrainedModel, MODEL_FORMAT_VERSION};

/// Settings for (prejudice-regularized) weighted logistic regression.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct LogisticConfig {
    /// Ridge strength on the coefficients (intercept unpenalized).
    pub l2_lambda: f64,
    /// Prejudice penalty weight; 0 disables the term.
    pub eta: f64,
    pub max_iters: usize,
    /// Initial step for the backtracking line search.
    pub step_size: f64,
    /// Stop when the gradient infinity norm drops below this.
    pub tol: f64,
}

impl Default for LogisticConfig {
    fn default() -> Self {
        LogisticConfig {
            l2_lambda: 1e-2,
            eta: 0.0,
            max_iters: 2000,
            step_size: 1.0,
            tol: 1e-7,
        }
    }
}

impl LogisticConfig {
    fn validate(&self) -> Result<()> {
        if self.l2_lambda < 0.0 || self.eta < 0.0 {
            return Err(Error::Config("l2_lambda and eta must be >= 0".into()));
        }
        if self.max_iters == 0 || self.step_size <= 0.0 || self.tol <= 0.0 {
            return Err(Error::Config(
                "max_iters, step_size and tol must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Prejudice index of a score vector:
///
/// PI = sum_i w_i * sum_y p_i(y) * ln( p(y|s_i) / p(y) )
///
/// with p_i(1) = score_i, group conditionals and marginals as weighted means
/// of the scores. Zero exactly when scores are group-independent; always >= 0.
pub fn prejudice_index(scores: &[f64], protected: &[u8], weights: &[f64]) -> Result<f64> {
    let stats = GroupScoreStats::compute(scores, protected, weights)?;
    let mut pi = 0.0;
    for i in 0..scores.len() {
        pi += weights[i] * stats.row_term(scores[i], protected[i]);
    }
    Ok(pi)
}

/// Weighted mean scores per group and overall.
struct GroupScoreStats {
    /// p(1|s) for s = 0, 1
    cond: [f64; 2],
    /// p(1)
    marginal: f64,
}

impl GroupScoreStats {
    fn compute(scores: &[f64], protected: &[u8], weights: &[f64]) -> Result<GroupScoreStats> {
        let n = scores.len();
        if protected.len() != n || weights.len() != n {
            return Err(Error::Data("prejudice index inputs have unequal lengths".into()));
        }
        let mut w_group = [0.0_f64; 2];
        let mut sum_group = [0.0_f64; 2];
        for i in 0..n {
            let s = protected[i] as usize;
            w_group[s] += weights[i];
            sum_group[s] += weights[i] * scores[i];
        }
        for s in 0..2 {
            if w_group[s] == 0.0 {
                return Err(Error::EmptyGroup(s as u8));
            }
        }
        let total_w = w_group[0] + w_group[1];
        Ok(GroupScoreStats {
            cond: [sum_group[0] / w_group[0], sum_group[1] / w_group[1]],
            marginal: (sum_group[0] + sum_group[1]) / total_w,
        })
    }

    /// sum_y p_i(y) ln(p(y|s)/p(y)); terms with p_i(y) = 0 contribute 0.
    fn row_term(&self, score: f64, s: u8) -> f64 {
        let cond = self.cond[s as usize];
        let mut t = 0.0;
        if score > 0.0 {
            t += score * (cond / self.marginal).ln();
        }
        if score < 1.0 {
            t += (1.0 - score) * ((1.0 - cond) / (1.0 - self.marginal)).ln();
        }
        t
    }

    /// d(row contribution)/d(score) ignoring the dependence of the group
    /// means on the score; that dependence cancels exactly in the full
    /// gradient (the sum over rows of the mean-derivative terms is zero).
    fn row_delta(&self, s: u8) -> f64 {
        let cond = self.cond[s as usize];
        (cond / self.marginal).ln() - ((1.0 - cond) / (1.0 - self.marginal)).ln()
    }
}

/// The training objective as an explicit function of the parameter vector
/// `[coefficients..., intercept]`, for a fixed design matrix.
///
/// J = (1/W) sum_i w_i * nll_i + eta * PI / W + (lambda/2) ||theta||^2
pub struct LogisticProblem<'a> {
    pub features: &'a Matrix,
    pub labels: &'a [u8],
    pub protected: &'a [u8],
    pub weights: &'a [f64],
    pub l2_lambda: f64,
    pub eta: f64,
}

impl LogisticProblem<'_> {
    pub fn n_params(&self) -> usize {
        self.features.n_cols() + 1
    }

    fn scores(&self, params: &[f64]) -> Vec<f64> {
        let d = self.features.n_cols();
        let intercept = params[d];
        self.features
            .rows()
            .map(|row| {
                let z: f64 =
                    intercept + row.iter().zip(&params[..d]).map(|(x, c)| x * c).sum::<f64>();
                sigmoid(z)
            })
            .collect()
    }

    pub fn value(&self, params: &[f64]) -> Result<f64> {
        let d = self.features.n_cols();
        let intercept = params[d];
        let w_total: f64 = self.weights.iter().sum();
        let mut nll = 0.0;
        for (i, row) in self.features.rows().enumerate() {
            let z: f64 =
                intercept + row.iter().zip(&params[..d]).map(|(x, c)| x * c).sum::<f64>();
            // ln(1 + e^z) - y z, computed stably
            let softplus = if z > 0.0 {
                z + (-z).exp().ln_1p()
            } else {
                z.exp().ln_1p()
            };
            nll += self.weights[i] * (softplus - f64::from(self.labels[i]) * z);
        }
        let mut obj = nll / w_total;
        if self.eta > 0.0 {
            let pi = prejudice_index(&self.scores(params), self.protected, self.weights)?;
            obj += self.eta * pi / w_total;
        }
        obj += 0.5 * self.l2_lambda * params[..d].iter().map(|c| c * c).sum::<f64>();
        Ok(obj)
    }

    pub fn gradient(&self, params: &[f64]) -> Result<Vec<f64>> {
        let d = self.features.n_cols();
        let w_total: f64 = self.weights.iter().sum();
        let scores = self.scores(params);
        let stats = if self.eta > 0.0 {
            Some(GroupScoreStats::compute(&scores, self.protected, self.weights)?)
        } else {
            None
        };
        let mut grad = vec![0.0; d + 1];
        for (i, row) in self.features.rows().enumerate() {
            let p = scores[i];
            let mut residual = self.weights[i] * (p - f64::from(self.labels[i]));
            if let Some(stats) = &stats {
                residual +=
                    self.eta * self.weights[i] * p * (1.0 - p) * stats.row_delta(self.protected[i]);
            }
            for j in 0..d {
                grad[j] += residual * row[j];
            }
            grad[d] += residual;
        }
        for g in grad.iter_mut() {
            *g /= w_total;
        }
        for j in 0..d {
            grad[j] += self.l2_lambda * params[j];
        }
        Ok(grad)
    }
}

/// Fits weighted logistic regression by full-batch gradient descent with a
/// backtracking line search. Features are standardized internally and the
/// standardization is stored with the model.
pub fn train_logistic(ds: &LabeledDataset, cfg: &LogisticConfig) -> Result<TrainedModel> {
    cfg.validate()?;
    if ds.n_rows() < 2 {
        return Err(Error::Data("need at least 2 rows".into()));
    }
    if ds.labels.iter().all(|&y| y == 1) || ds.labels.iter().all(|&y| y == 0) {
        return Err(Error::SingleClass);
    }

    let standardizer = Standardizer::fit(&ds.features, &ds.weights);
    let d = ds.n_features();
    let mut std_rows = Vec::with_capacity(ds.n_rows());
    let mut buf = vec![0.0; d];
    for row in ds.features.rows() {
        standardizer.apply(row, &mut buf);
        std_rows.push(buf.clone());
    }
    let std_features = Matrix::from_rows(std_rows, d)?;

    let problem = LogisticProblem {
        features: &std_features,
        labels: &ds.labels,
        protected: &ds.protected,
        weights: &ds.weights,
        l2_lambda: cfg.l2_lambda,
        eta: cfg.eta,
    };

    let mut params = vec![0.0; d + 1];
    let mut value = problem.value(&params)?;
    let mut converged = false;
    for _ in 0..cfg.max_iters {
        let grad = problem.gradient(&params)?;
        let inf_norm = grad.iter().fold(0.0_f64, |m, g| m.max(g.abs()));
        if inf_norm < cfg.tol {
            converged = true;
            break;
        }
        let grad_sq: f64 = grad.iter().map(|g| g * g).sum();
        let mut step = cfg.step_size;
        let mut accepted = false;
        for _ in 0..60 {
            let candidate: Vec<f64> = params
                .iter()
                .zip(&grad)
                .map(|(p, g)| p - step * g)
                .collect();
            let cand_value = problem.value(&candidate)?;
            if cand_value <= value - 1e-4 * step * grad_sq {
                params = candidate;
                value = cand_value;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            // line search stalled at numerical precision
            break;
        }
    }

    let intercept = params[d];
    params.truncate(d);
    Ok(TrainedModel {
        version: MODEL_FORMAT_VERSION,
        feature_names: ds.feature_names.clone(),
        params: ModelParams::Logistic {
            coefficients: params,
            intercept,
            standardizer,
            converged,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::predict_scores;
    use approx::assert_relative_eq;

    fn toy_separable() -> LabeledDataset {
        let rows = vec![vec![-2.0], vec![-1.0], vec![1.0], vec![2.0]];
        LabeledDataset::new(
            Matrix::from_rows(rows, 1).unwrap(),
            vec!["x".into()],
            vec![0, 0, 1, 1],
            vec![0, 1, 0, 1],
            vec![1.0; 4],
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
        )
        .unwrap()
    }

    #[test]
    fn separable_toy_set_reaches_perfect_balanced_accuracy() {
        let cfg = LogisticConfig {
            l2_lambda: 0.0,
            eta: 0.0,
            max_iters: 5000,
            ..LogisticConfig::default()
        };
        let model = train_logistic(&toy_separable(), &cfg).unwrap();
        let ds = toy_separable();
        let scores = predict_scores(&model, &ds.features).unwrap();
        let correct = scores
            .iter()
            .zip(&ds.labels)
            .all(|(s, &y)| (*s > 0.5) == (y == 1));
        assert!(correct, "scores: {scores:?}");
    }

    #[test]
    fn single_class_input_is_rejected() {
        let rows = vec![vec![0.0], vec![1.0]];
        let ds = LabeledDataset::new(
            Matrix::from_rows(rows, 1).unwrap(),
            vec!["x".into()],
            vec![1, 1],
            vec![0, 1],
            vec![1.0; 2],
            vec!["a".into(), "b".into()],
        )
        .unwrap();
        assert!(matches!(
            train_logistic(&ds, &LogisticConfig::default()).unwrap_err(),
            Error::SingleClass
        ));
    }

    #[test]
    fn tiny_eta_matches_eta_zero() {
        let ds = toy_separable();
        let base = LogisticConfig {
            l2_lambda: 0.1,
            ..LogisticConfig::default()
        };
        let m0 = train_logistic(&ds, &base).unwrap();
        let m_eps = train_logistic(
            &ds,
            &LogisticConfig {
                eta: 1e-12,
                ..base
            },
        )
        .unwrap();
        let s0 = predict_scores(&m0, &ds.features).unwrap();
        let s_eps = predict_scores(&m_eps, &ds.features).unwrap();
        for (a, b) in s0.iter().zip(&s_eps) {
            assert_relative_eq!(a, b, epsilon = 1e-6);
        }
    }

    #[test]
    fn prejudice_index_zero_for_identical_scores() {
        let scores = [0.4; 6];
        let protected = [1, 1, 1, 0, 0, 0];
        let weights = [1.0; 6];
        let pi = prejudice_index(&scores, &protected, &weights).unwrap();
        assert_relative_eq!(pi, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn prejudice_index_brute_force_fixture() {
        // scores 0.9 for group 1, 0.1 for group 0, equal sizes, unit weights.
        // Brute-force evaluation of the defining sum:
        // each row contributes 0.9*ln(0.9/0.5) + 0.1*ln(0.1/0.5) (by symmetry
        // the group-0 rows contribute the same), so
        // PI = 4 * (0.9*ln(1.8) + 0.1*ln(0.2)) = 1.472255...
        let scores = [0.9, 0.9, 0.1, 0.1];
        let protected = [1, 1, 0, 0];
        let weights = [1.0; 4];
        let expected = 4.0 * (0.9 * (0.9_f64 / 0.5).ln() + 0.1 * (0.1_f64 / 0.5).ln());
        let pi = prejudice_index(&scores, &protected, &weights).unwrap();
        assert_relative_eq!(pi, expected, epsilon = 1e-12);
        assert!(pi > 0.0);
    }

    #[test]
    fn prejudice_index_invariant_under_group_swap() {
        let scores = [0.9, 0.3, 0.5, 0.2, 0.8];
        let protected = [1, 0, 1, 0, 0];
        let swapped: Vec<u8> = protected.iter().map(|s| 1 - s).collect();
        let weights = [1.0, 2.0, 0.5, 1.5, 1.0];
        let a = prejudice_index(&scores, &protected, &weights).unwrap();
        let b = prejudice_index(&scores, &swapped, &weights).unwrap();
        assert_relative_eq!(a, b, epsilon = 1e-12);
    }

    #[test]
    fn prejudice_index_requires_both_groups() {
        let scores = [0.5, 0.6];
        let protected = [1, 1];
        let weights = [1.0, 1.0];
        assert!(matches!(
            prejudice_index(&scores, &protected, &weights).unwrap_err(),
            Error::EmptyGroup(0)
        ));
    }

    #[test]
    fn convex_objective_converges_to_unique_predictions() {
        // lambda > 0, eta = 0: strictly convex. Fit from theta = 0 (the
        // default) and compare against a run whose line search starts from a
        // much smaller step; both must land on the same predictions.
        let ds = toy_separable();
        let a = train_logistic(
            &ds,
            &LogisticConfig {
                l2_lambda: 0.5,
                ..LogisticConfig::default()
            },
        )
        .unwrap();
        let b = train_logistic(
            &ds,
            &LogisticConfig {
                l2_lambda: 0.5,
                step_size: 0.05,
                max_iters: 20000,
                ..LogisticConfig::default()
            },
        )
        .unwrap();
        let sa = predict_scores(&a, &ds.features).unwrap();
        let sb = predict_scores(&b, &ds.features).unwrap();
        for (x, y) in sa.iter().zip(&sb) {
            assert_relative_eq!(x, y, epsilon = 1e-6);
        }
    }
}
