use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use clinfair::data::{binarize_column, to_labeled, Cell, LabeledDataset};
use clinfair::evaluate::{run_experiment, Classifier, ExperimentConfig, Mitigation};
use clinfair::exec::ExecMode;
use clinfair::featurize::{assemble, AssembleOptions, DoseTable, COL_FUTURE_DOSE};
use clinfair::models::{train_forest, ForestConfig};
use clinfair::synth::bundle::{COL_GENDER, COL_PATIENT_ID};
use clinfair::synth::{generate, SynthConfig};

fn dataset(n_patients: usize) -> LabeledDataset {
    let cfg = SynthConfig {
        seed: 17,
        n_patients,
        ..SynthConfig::default()
    };
    let bundle = generate(&cfg).unwrap();
    let assembled = assemble(&bundle, &DoseTable::standard(), &AssembleOptions::default()).unwrap();
    let binary = binarize_column(&assembled.features, COL_FUTURE_DOSE, |d| d > 0.0).unwrap();
    to_labeled(
        &binary,
        COL_FUTURE_DOSE,
        COL_GENDER,
        COL_PATIENT_ID,
        &Cell::Bool(true),
        &Cell::Bool(true),
    )
    .unwrap()
}

fn modes() -> Vec<(&'static str, ExecMode)> {
    vec![
        ("sequential", ExecMode::Sequential),
        ("parallel", ExecMode::Parallel),
    ]
}

fn bench_forest_training(c: &mut Criterion) {
    let ds = dataset(600);
    let cfg = ForestConfig {
        n_trees: 100,
        ..ForestConfig::default()
    };
    let mut group = c.benchmark_group("forest_training");
    group.sample_size(10);
    for (name, mode) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &mode| {
            b.iter(|| train_forest(&ds, &cfg, mode).unwrap());
        });
    }
    group.finish();
}

fn bench_experiment(c: &mut Criterion) {
    let ds = dataset(400);
    let cfg = ExperimentConfig {
        classifier: Classifier::Logistic,
        mitigation: Mitigation::Reweigh,
        seed: 3,
        ..ExperimentConfig::default()
    };
    let mut group = c.benchmark_group("logistic_experiment");
    group.sample_size(10);
    for (name, mode) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &mode| {
            b.iter(|| run_experiment(&ds, &cfg, mode).unwrap());
        });
    }
    group.finish();
}

criterion_group!(benches, bench_forest_training, bench_experiment);
criterion_main!(benches);
