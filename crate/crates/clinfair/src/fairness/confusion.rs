use crate::error::{Error, Result};

/// Confusion counts for one group. Entries are weight sums; with unit weights
/// they are plain counts.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Confusion {
    pub tp: f64,
    pub fp: f64,
    pub tn: f64,
    pub fn_: f64,
}

impl Confusion {
    pub fn total(&self) -> f64 {
        self.tp + self.fp + self.tn + self.fn_
    }

    /// Selection rate: fraction predicted favourable.
    pub fn selection_rate(&self) -> Option<f64> {
        let n = self.total();
        (n > 0.0).then(|| (self.tp + self.fp) / n)
    }

    pub fn tpr(&self) -> Option<f64> {
        let p = self.tp + self.fn_;
        (p > 0.0).then(|| self.tp / p)
    }

    pub fn fpr(&self) -> Option<f64> {
        let n = self.fp + self.tn;
        (n > 0.0).then(|| self.fp / n)
    }

    pub fn tnr(&self) -> Option<f64> {
        let n = self.fp + self.tn;
        (n > 0.0).then(|| self.tn / n)
    }

    fn add(&mut self, label: u8, prediction: u8, weight: f64) {
        match (label, prediction) {
            (1, 1) => self.tp += weight,
            (0, 1) => self.fp += weight,
            (0, 0) => self.tn += weight,
            (1, 0) => self.fn_ += weight,
            _ => unreachable!("labels and predictions are binary"),
        }
    }
}

/// Per-group confusion counts; the sole input to all fairness metrics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupConfusion {
    pub privileged: Confusion,
    pub unprivileged: Confusion,
}

impl GroupConfusion {
    /// Pooled counts over both groups.
    pub fn pooled(&self) -> Confusion {
        Confusion {
            tp: self.privileged.tp + self.unprivileged.tp,
            fp: self.privileged.fp + self.unprivileged.fp,
            tn: self.privileged.tn + self.unprivileged.tn,
            fn_: self.privileged.fn_ + self.unprivileged.fn_,
        }
    }
}

/// Tallies weighted confusion counts per protected group.
///
/// Pass `None` for unit weights.
pub fn confusion_by_group(
    labels: &[u8],
    predictions: &[u8],
    protected: &[u8],
    weights: Option<&[f64]>,
) -> Result<GroupConfusion> {
    let n = labels.len();
    if predictions.len() != n || protected.len() != n || weights.map_or(false, |w| w.len() != n) {
        return Err(Error::Data("confusion inputs have unequal lengths".into()));
    }
    let mut privileged = Confusion::default();
    let mut unprivileged = Confusion::default();
    for i in 0..n {
        let w = weights.map_or(1.0, |w| w[i]);
        let conf = if protected[i] == 1 {
            &mut privileged
        } else {
            &mut unprivileged
        };
        conf.add(labels[i], predictions[i], w);
    }
    if privileged.total() == 0.0 {
        return Err(Error::EmptyGroup(1));
    }
    if unprivileged.total() == 0.0 {
        return Err(Error::EmptyGroup(0));
    }
    Ok(GroupConfusion {
        privileged,
        unprivileged,
    })
}
