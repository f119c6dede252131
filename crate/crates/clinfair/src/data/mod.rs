//! Tabular data model: typed tables, CSV ingestion, and the labeled-dataset
//! abstraction consumed by models, mitigation, and evaluation.

mod labeled;
mod split;
mod table;

pub use labeled::{to_labeled, LabeledDataset, Matrix};
pub use split::{partition_indices, split_disjoint_groups, SplitSpec};
pub use table::{binarize_column, Cell, ColumnKind, Schema, Table};
