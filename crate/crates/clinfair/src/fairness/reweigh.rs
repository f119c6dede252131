use crate::data::LabeledDataset;
use crate::error::{Error, Result};

/// Reweighing weights: w(s, y) = n(s) * n(y) / (n * n(s, y)).
///
/// After weighting, the weighted favourable rate is identical in both
/// protected groups, i.e. label and protected attribute become independent
/// under the weighted distribution.
pub fn reweigh(ds: &LabeledDataset) -> Result<Vec<f64>> {
    let n = ds.n_rows() as f64;
    let mut cell = [[0.0_f64; 2]; 2]; // [s][y]
    for i in 0..ds.n_rows() {
        cell[ds.protected[i] as usize][ds.labels[i] as usize] += 1.0;
    }
    for s in 0..2 {
        for y in 0..2 {
            if cell[s][y] == 0.0 {
                return Err(Error::EmptyCell {
                    group: s as u8,
                    label: y as u8,
                });
            }
        }
    }
    let n_s = [cell[0][0] + cell[0][1], cell[1][0] + cell[1][1]];
    let n_y = [cell[0][0] + cell[1][0], cell[0][1] + cell[1][1]];
    let mut w = [[0.0_f64; 2]; 2];
    for s in 0..2 {
        for y in 0..2 {
            w[s][y] = n_s[s] * n_y[y] / (n * cell[s][y]);
        }
    }
    Ok((0..ds.n_rows())
        .map(|i| w[ds.protected[i] as usize][ds.labels[i] as usize])
        .collect())
}
