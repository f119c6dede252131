//! Human-readable outputs: per-fold threshold-sweep charts as standalone SVG
//! documents and a markdown report aggregating runs and paired comparisons.

mod markdown;
mod svg;

pub use markdown::{render_report, ComparisonEntry, RunEntry};
pub use svg::{fold_chart, SecondaryMetric};
