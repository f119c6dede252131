//! Randomized invariant checks for the data-handling and fairness layers.

use proptest::collection::vec;
use proptest::prelude::*;

use clinfair::data::{partition_indices, LabeledDataset, Matrix};
use clinfair::evaluate::{select_threshold, sweep};
use clinfair::fairness::{confusion_by_group, fairness_report, reweigh};
use clinfair::models::{ModelParams, Standardizer, TrainedModel, MODEL_FORMAT_VERSION};

fn dataset(labels: Vec<u8>, protected: Vec<u8>, groups: Vec<String>) -> LabeledDataset {
    let n = labels.len();
    let rows: Vec<Vec<f64>> = (0..n).map(|i| vec![i as f64]).collect();
    LabeledDataset::new(
        Matrix::from_rows(rows, 1).unwrap(),
        vec!["x".into()],
        labels,
        protected,
        vec![1.0; n],
        groups,
    )
    .unwrap()
}

proptest! {
    #[test]
    fn partitions_are_disjoint_and_complete(
        group_of_row in vec(0usize..12, 24..64),
        seed in any::<u64>(),
    ) {
        let groups: Vec<String> = group_of_row.iter().map(|g| format!("g{g}")).collect();
        let distinct = {
            let mut d: Vec<&String> = groups.iter().collect();
            d.sort();
            d.dedup();
            d.len()
        };
        prop_assume!(distinct >= 3);
        let parts = partition_indices(&groups, &[0.5, 0.3, 0.2], seed).unwrap();

        let mut seen = vec![false; groups.len()];
        for part in &parts {
            for &i in part {
                prop_assert!(!seen[i], "row {i} assigned twice");
                seen[i] = true;
            }
        }
        prop_assert!(seen.iter().all(|&s| s), "some row is unassigned");

        for a in 0..parts.len() {
            for b in a + 1..parts.len() {
                let ga: std::collections::HashSet<&String> =
                    parts[a].iter().map(|&i| &groups[i]).collect();
                for &i in &parts[b] {
                    prop_assert!(!ga.contains(&groups[i]), "group split across partitions");
                }
            }
        }
    }

    #[test]
    fn reweighing_enforces_independence(
        labels in vec(0u8..2, 8..64),
        protected_bits in vec(0u8..2, 8..64),
    ) {
        let n = labels.len().min(protected_bits.len());
        let labels = labels[..n].to_vec();
        let protected = protected_bits[..n].to_vec();
        let mut cells = [0u32; 4];
        for i in 0..n {
            cells[(2 * protected[i] + labels[i]) as usize] += 1;
        }
        prop_assume!(cells.iter().all(|&c| c > 0));

        let groups: Vec<String> = (0..n).map(|i| format!("g{i}")).collect();
        let ds = dataset(labels.clone(), protected.clone(), groups);
        let w = reweigh(&ds).unwrap();
        prop_assert!((w.iter().sum::<f64>() - n as f64).abs() < 1e-9);

        let rate = |s: u8| {
            let mut pos = 0.0;
            let mut tot = 0.0;
            for i in 0..n {
                if protected[i] == s {
                    tot += w[i];
                    if labels[i] == 1 {
                        pos += w[i];
                    }
                }
            }
            pos / tot
        };
        prop_assert!((rate(0) - rate(1)).abs() < 1e-12);
    }

    #[test]
    fn group_swap_negates_difference_metrics(
        labels in vec(0u8..2, 8..48),
        preds in vec(0u8..2, 8..48),
        protected_bits in vec(0u8..2, 8..48),
    ) {
        let n = labels.len().min(preds.len()).min(protected_bits.len());
        let labels = &labels[..n];
        let preds = &preds[..n];
        let protected = &protected_bits[..n];
        prop_assume!(protected.contains(&0) && protected.contains(&1));

        let flipped: Vec<u8> = protected.iter().map(|&s| 1 - s).collect();
        let a = fairness_report(&confusion_by_group(labels, preds, protected, None).unwrap());
        let b = fairness_report(&confusion_by_group(labels, preds, &flipped, None).unwrap());

        for (x, y) in [
            (a.statistical_parity_difference, b.statistical_parity_difference),
            (a.equal_opportunity_difference, b.equal_opportunity_difference),
            (a.average_odds_difference, b.average_odds_difference),
        ] {
            match (x, y) {
                (Some(x), Some(y)) => prop_assert!((x + y).abs() < 1e-12),
                _ => {}
            }
        }
        if let (Some(x), Some(y)) = (a.disparate_impact_error, b.disparate_impact_error) {
            // DI error is symmetric in the group roles
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn chosen_threshold_maximizes_balanced_accuracy(
        scores in vec(0.0f64..1.0, 8..64),
        labels in vec(0u8..2, 8..64),
        protected_bits in vec(0u8..2, 8..64),
    ) {
        let n = scores.len().min(labels.len()).min(protected_bits.len());
        let scores = &scores[..n];
        let labels = &labels[..n];
        let protected = &protected_bits[..n];
        prop_assume!(labels.contains(&0) && labels.contains(&1));

        let grid: Vec<f64> = (1..=99).map(|i| i as f64 / 100.0).collect();
        let curve = sweep(scores, labels, protected, &grid).unwrap();
        let chosen = select_threshold(&curve).unwrap();
        let chosen_idx = grid.iter().position(|&t| t == chosen).unwrap();
        let chosen_ba = curve.balanced_accuracy[chosen_idx].unwrap();
        for (i, ba) in curve.balanced_accuracy.iter().enumerate() {
            if let Some(ba) = ba {
                prop_assert!(*ba <= chosen_ba);
                if *ba == chosen_ba {
                    prop_assert!(chosen <= grid[i], "tie not broken toward smaller threshold");
                }
            }
        }
    }

    #[test]
    fn model_json_round_trip_is_bit_exact(
        coefficients in vec(-10.0f64..10.0, 1..6),
        intercept in -5.0f64..5.0,
    ) {
        let d = coefficients.len();
        let model = TrainedModel {
            version: MODEL_FORMAT_VERSION,
            feature_names: (0..d).map(|i| format!("f{i}")).collect(),
            params: ModelParams::Logistic {
                coefficients,
                intercept,
                standardizer: Standardizer {
                    means: vec![0.25; d],
                    stds: vec![1.5; d],
                },
                converged: true,
            },
        };
        let json = model.to_json().unwrap();
        let back = TrainedModel::from_json(&json).unwrap();
        prop_assert_eq!(&model, &back);
        prop_assert_eq!(json, back.to_json().unwrap());
    }
}
