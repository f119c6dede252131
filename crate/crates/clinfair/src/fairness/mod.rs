//! Group fairness metrics, pooled performance metrics, and the reweighing
//! pre-processor.

mod confusion;
mod metrics;
mod reweigh;

pub use confusion::{confusion_by_group, Confusion, GroupConfusion};
pub use metrics::{fairness_report, performance_report, FairnessReport, PerformanceReport};
pub use reweigh::reweigh;
