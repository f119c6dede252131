use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::data::labeled::LabeledDataset;
use crate::error::{Error, Result};

/// Partition fractions plus the seed driving group shuffling.
#[derive(Debug, Clone)]
pub struct SplitSpec {
    pub fractions: Vec<f64>,
    pub seed: u64,
}

impl SplitSpec {
    pub fn new(fractions: Vec<f64>, seed: u64) -> Result<SplitSpec> {
        if fractions.is_empty() || fractions.iter().any(|&f| f <= 0.0) {
            return Err(Error::Config("all fractions must be positive".into()));
        }
        let sum: f64 = fractions.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::Config(format!("fractions sum to {sum}, expected 1")));
        }
        Ok(SplitSpec { fractions, seed })
    }
}

/// Partitions row indices so that every group id lands in exactly one
/// partition. Group ids are shuffled with the seed, then assigned greedily to
/// the partition with the largest remaining row deficit. Returned index lists
/// are sorted.
pub fn partition_indices(group_ids: &[String], fractions: &[f64], seed: u64) -> Result<Vec<Vec<usize>>> {
    let k = fractions.len();
    let mut seen = HashMap::new();
    let mut groups: Vec<&str> = Vec::new();
    let mut rows_per_group: Vec<Vec<usize>> = Vec::new();
    for (i, g) in group_ids.iter().enumerate() {
        let idx = *seen.entry(g.as_str()).or_insert_with(|| {
            groups.push(g.as_str());
            rows_per_group.push(Vec::new());
            groups.len() - 1
        });
        rows_per_group[idx].push(i);
    }
    if groups.len() < k {
        return Err(Error::TooFewGroups {
            groups: groups.len(),
            partitions: k,
        });
    }

    let mut order: Vec<usize> = (0..groups.len()).collect();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);

    let n = group_ids.len() as f64;
    let targets: Vec<f64> = fractions.iter().map(|f| f * n).collect();
    let mut filled = vec![0.0_f64; k];
    let mut assignment: Vec<Vec<usize>> = vec![Vec::new(); k];
    // seed each partition with one group so none ends up empty
    for (p, &g) in order.iter().take(k).enumerate() {
        filled[p] += rows_per_group[g].len() as f64;
        assignment[p].extend(&rows_per_group[g]);
    }
    for &g in order.iter().skip(k) {
        let p = (0..k)
            .max_by(|&a, &b| {
                let da = targets[a] - filled[a];
                let db = targets[b] - filled[b];
                da.partial_cmp(&db).unwrap().then(b.cmp(&a))
            })
            .unwrap();
        filled[p] += rows_per_group[g].len() as f64;
        assignment[p].extend(&rows_per_group[g]);
    }
    for idx in &mut assignment {
        idx.sort_unstable();
    }
    Ok(assignment)
}

/// Splits a dataset into group-disjoint partitions approximating the
/// requested fractions by row count. Deterministic for a fixed seed.
pub fn split_disjoint_groups(ds: &LabeledDataset, spec: &SplitSpec) -> Result<Vec<LabeledDataset>> {
    Ok(partition_indices(&ds.group_ids, &spec.fractions, spec.seed)?
        .into_iter()
        .map(|idx| ds.select(&idx))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::labeled::Matrix;
    use std::collections::HashSet;

    fn dataset(group_ids: Vec<&str>) -> LabeledDataset {
        let n = group_ids.len();
        let rows: Vec<Vec<f64>> = (0..n).map(|i| vec![i as f64]).collect();
        LabeledDataset::new(
            Matrix::from_rows(rows, 1).unwrap(),
            vec!["x".into()],
            (0..n).map(|i| (i % 2) as u8).collect(),
            (0..n).map(|i| ((i / 2) % 2) as u8).collect(),
            vec![1.0; n],
            group_ids.into_iter().map(String::from).collect(),
        )
        .unwrap()
    }

    #[test]
    fn halves_are_group_disjoint() {
        let ds = dataset(vec!["a", "b", "c", "d", "e", "f"]);
        let spec = SplitSpec::new(vec![0.5, 0.5], 7).unwrap();
        let parts = split_disjoint_groups(&ds, &spec).unwrap();
        let g0: HashSet<_> = parts[0].group_ids.iter().collect();
        let g1: HashSet<_> = parts[1].group_ids.iter().collect();
        assert!(g0.is_disjoint(&g1));
        assert_eq!(parts[0].n_rows() + parts[1].n_rows(), 6);
    }

    #[test]
    fn multi_admission_patient_stays_together() {
        let ds = dataset(vec!["a", "b", "b", "b", "c", "d", "e", "f"]);
        let spec = SplitSpec::new(vec![0.5, 0.5], 3).unwrap();
        let parts = split_disjoint_groups(&ds, &spec).unwrap();
        let in_first = parts[0].group_ids.iter().filter(|g| *g == "b").count();
        let in_second = parts[1].group_ids.iter().filter(|g| *g == "b").count();
        assert!(
            (in_first == 3 && in_second == 0) || (in_first == 0 && in_second == 3),
            "rows of one patient split across partitions"
        );
    }

    #[test]
    fn same_seed_gives_identical_partitions() {
        let ds = dataset(vec!["a", "b", "c", "d", "e", "f", "g", "h"]);
        let spec = SplitSpec::new(vec![0.625, 0.375], 42).unwrap();
        let p1 = split_disjoint_groups(&ds, &spec).unwrap();
        let p2 = split_disjoint_groups(&ds, &spec).unwrap();
        assert_eq!(p1, p2);
    }

    #[test]
    fn too_few_groups_is_an_error() {
        let ds = dataset(vec!["a", "a", "a"]);
        let spec = SplitSpec::new(vec![0.5, 0.5], 0).unwrap();
        assert!(matches!(
            split_disjoint_groups(&ds, &spec).unwrap_err(),
            Error::TooFewGroups { .. }
        ));
    }

    #[test]
    fn bad_fractions_rejected() {
        assert!(SplitSpec::new(vec![0.5, 0.4], 0).is_err());
        assert!(SplitSpec::new(vec![1.5, -0.5], 0).is_err());
    }
}
