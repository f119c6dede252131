use std::collections::HashSet;

use crate::data::table::{Cell, Table};
use crate::error::{Error, Result};

/// Dense row-major matrix of floats.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    data: Vec<f64>,
    n_rows: usize,
    n_cols: usize,
}

impl Matrix {
    pub fn from_rows(rows: Vec<Vec<f64>>, n_cols: usize) -> Result<Matrix> {
        let n_rows = rows.len();
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for row in &rows {
            if row.len() != n_cols {
                return Err(Error::DimensionMismatch {
                    expected: n_cols,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Matrix { data, n_rows, n_cols })
    }

    pub fn zeros(n_rows: usize, n_cols: usize) -> Matrix {
        Matrix {
            data: vec![0.0; n_rows * n_cols],
            n_rows,
            n_cols,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n_cols + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.n_cols.max(1))
    }
}

/// Feature matrix plus label, protected attribute, instance weights and group
/// identifiers — the universal currency between pipeline stages.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    pub features: Matrix,
    pub feature_names: Vec<String>,
    /// 1 = favourable outcome.
    pub labels: Vec<u8>,
    /// 1 = privileged group.
    pub protected: Vec<u8>,
    pub weights: Vec<f64>,
    pub group_ids: Vec<String>,
}

impl LabeledDataset {
    pub fn new(
        features: Matrix,
        feature_names: Vec<String>,
        labels: Vec<u8>,
        protected: Vec<u8>,
        weights: Vec<f64>,
        group_ids: Vec<String>,
    ) -> Result<LabeledDataset> {
        let n = features.n_rows();
        if feature_names.len() != features.n_cols() {
            return Err(Error::Data(format!(
                "{} feature names for {} columns",
                feature_names.len(),
                features.n_cols()
            )));
        }
        let unique: HashSet<&String> = feature_names.iter().collect();
        if unique.len() != feature_names.len() {
            return Err(Error::Data("duplicate feature names".into()));
        }
        for (what, len) in [
            ("labels", labels.len()),
            ("protected", protected.len()),
            ("weights", weights.len()),
            ("group_ids", group_ids.len()),
        ] {
            if len != n {
                return Err(Error::Data(format!(
                    "{what} has length {len}, expected {n}"
                )));
            }
        }
        if labels.iter().any(|&y| y > 1) || protected.iter().any(|&s| s > 1) {
            return Err(Error::Data("labels and protected must be 0 or 1".into()));
        }
        if weights.iter().any(|w| !w.is_finite() || *w <= 0.0) {
            return Err(Error::Data("weights must be strictly positive and finite".into()));
        }
        Ok(LabeledDataset {
            features,
            feature_names,
            labels,
            protected,
            weights,
            group_ids,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.features.n_rows()
    }

    pub fn n_features(&self) -> usize {
        self.features.n_cols()
    }

    /// Same dataset with a new weight vector.
    pub fn with_weights(&self, weights: Vec<f64>) -> Result<LabeledDataset> {
        LabeledDataset::new(
            self.features.clone(),
            self.feature_names.clone(),
            self.labels.clone(),
            self.protected.clone(),
            weights,
            self.group_ids.clone(),
        )
    }

    /// Row subset, preserving order of `indices`.
    pub fn select(&self, indices: &[usize]) -> LabeledDataset {
        let rows: Vec<Vec<f64>> = indices.iter().map(|&i| self.features.row(i).to_vec()).collect();
        LabeledDataset {
            features: Matrix::from_rows(rows, self.n_features()).expect("uniform width"),
            feature_names: self.feature_names.clone(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            protected: indices.iter().map(|&i| self.protected[i]).collect(),
            weights: indices.iter().map(|&i| self.weights[i]).collect(),
            group_ids: indices.iter().map(|&i| self.group_ids[i].clone()).collect(),
        }
    }

    pub fn distinct_groups(&self) -> Vec<String> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for g in &self.group_ids {
            if seen.insert(g.clone()) {
                out.push(g.clone());
            }
        }
        out
    }
}

/// Converts a table into a [`LabeledDataset`].
///
/// The label, protected and group columns are pulled out; every remaining
/// column is coerced to floats (booleans become 0/1). Missing cells in any
/// used column are an error, not imputed.
pub fn to_labeled(
    table: &Table,
    label_col: &str,
    protected_col: &str,
    group_col: &str,
    privileged_value: &Cell,
    favourable_value: &Cell,
) -> Result<LabeledDataset> {
    let label_idx = table.column_index(label_col)?;
    let prot_idx = table.column_index(protected_col)?;
    let group_idx = table.column_index(group_col)?;

    for (col, idx) in [(label_col, label_idx), (protected_col, prot_idx), (group_col, group_idx)] {
        for (row, cell) in table.rows().enumerate() {
            if cell[idx].is_missing() {
                return Err(Error::MissingCell {
                    column: col.to_string(),
                    row: row + 1,
                });
            }
        }
        if col != group_col {
            let distinct: Vec<&Cell> = table.rows().map(|r| &r[idx]).fold(Vec::new(), |mut acc, c| {
                if !acc.contains(&c) {
                    acc.push(c);
                }
                acc
            });
            if distinct.len() != 2 {
                return Err(Error::NotBinary {
                    column: col.to_string(),
                    found: distinct.len(),
                });
            }
        }
    }

    let feature_cols: Vec<(usize, String)> = table
        .schema()
        .columns()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != label_idx && *i != prot_idx && *i != group_idx)
        .map(|(i, (name, _))| (i, name.clone()))
        .collect();

    let mut rows = Vec::with_capacity(table.n_rows());
    let mut labels = Vec::with_capacity(table.n_rows());
    let mut protected = Vec::with_capacity(table.n_rows());
    let mut group_ids = Vec::with_capacity(table.n_rows());
    for (r, row) in table.rows().enumerate() {
        let mut feats = Vec::with_capacity(feature_cols.len());
        for (idx, name) in &feature_cols {
            let cell = &row[*idx];
            if cell.is_missing() {
                return Err(Error::MissingCell {
                    column: name.clone(),
                    row: r + 1,
                });
            }
            let v = cell.as_f64().ok_or_else(|| Error::BadCell {
                row: r + 1,
                column: name.clone(),
                text: cell.to_string(),
                reason: "non-numeric feature column".to_string(),
            })?;
            feats.push(v);
        }
        rows.push(feats);
        labels.push(u8::from(&row[label_idx] == favourable_value));
        protected.push(u8::from(&row[prot_idx] == privileged_value));
        group_ids.push(row[group_idx].to_string());
    }

    let n = rows.len();
    LabeledDataset::new(
        Matrix::from_rows(rows, feature_cols.len())?,
        feature_cols.into_iter().map(|(_, n)| n).collect(),
        labels,
        protected,
        vec![1.0; n],
        group_ids,
    )
}
