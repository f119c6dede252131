//! Synthetic five-table EHR bundle generation with tunable gender-bias
//! injection, standing in for the private clinical dataset.

pub mod bundle;
mod generate;

pub use bundle::RawEhrBundle;
pub use generate::{generate, summarize, SynthConfig, SynthSummary};
