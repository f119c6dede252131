//! Fairness-aware classification toolkit for clinical-style tabular data.
//!
//! The crate covers the full experimental pipeline: synthetic EHR generation
//! ([`synth`]), feature engineering ([`featurize`]), weighted classifiers
//! ([`models`]), fairness metrics and reweighing ([`fairness`]), and a grouped
//! cross-validation harness with threshold tuning ([`evaluate`]). Reports and
//! SVG charts live in [`report`].
//!
//! Data-parallel inner loops (tree fitting, fold execution) run through
//! [`exec::ExecMode`]; with the `parallel` feature (default) they can use
//! rayon, and results are identical to sequential execution for a fixed seed.

pub mod cli;
pub mod data;
pub mod error;
pub mod evaluate;
pub mod exec;
pub mod fairness;
pub mod featurize;
pub mod models;
pub mod report;
pub mod synth;

pub use error::{Error, Result};
