use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("header mismatch in {path}: expected {expected:?}, found {found:?}")]
    HeaderMismatch {
        path: String,
        expected: Vec<String>,
        found: Vec<String>,
    },

    #[error("unparseable cell at row {row}, column {column:?}: {text:?} ({reason})")]
    BadCell {
        row: usize,
        column: String,
        text: String,
        reason: String,
    },

    #[error("column {0:?} not found")]
    MissingColumn(String),

    #[error("missing cell in column {column:?} at row {row}")]
    MissingCell { column: String, row: usize },

    #[error("column {column:?} has {found} distinct values, expected exactly 2")]
    NotBinary { column: String, found: usize },

    #[error("fewer distinct groups ({groups}) than partitions ({partitions})")]
    TooFewGroups { groups: usize, partitions: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unknown tranquilizer {0:?}; extend the dose table to convert it")]
    UnknownDrug(String),

    #[error("diagnosis row has no diagnosis, end, or start date")]
    NoDiagnosisDate,

    #[error("referential integrity violation: {0}")]
    Integrity(String),

    #[error("training data contains a single class")]
    SingleClass,

    #[error("protected group {0} has no rows")]
    EmptyGroup(u8),

    #[error("empty (group, label) cell ({group}, {label}); reweighing undefined")]
    EmptyCell { group: u8, label: u8 },

    #[error("feature width mismatch: model expects {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("fold results do not share a partition: {0}")]
    FoldMismatch(String),

    #[error("{0}")]
    Data(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
