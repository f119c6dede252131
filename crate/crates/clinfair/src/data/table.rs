use std::fmt;
use std::path::Path;

use chrono::{NaiveDate, NaiveTime};

use crate::error::{Error, Result};

/// Declared kind of a table column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnKind {
    Identifier,
    Boolean,
    Integer,
    Float,
    Categorical,
    Date,
    Time,
}

/// A single cell. Missing cells are explicit, never silently zeroed.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Missing,
    Ident(String),
    Bool(bool),
    Int(i64),
    Float(f64),
    Cat(String),
    Date(NaiveDate),
    Time(NaiveTime),
}

impl Cell {
    pub fn is_missing(&self) -> bool {
        matches!(self, Cell::Missing)
    }

    fn conforms(&self, kind: ColumnKind) -> bool {
        matches!(
            (self, kind),
            (Cell::Missing, _)
                | (Cell::Ident(_), ColumnKind::Identifier)
                | (Cell::Bool(_), ColumnKind::Boolean)
                | (Cell::Int(_), ColumnKind::Integer)
                | (Cell::Float(_), ColumnKind::Float)
                | (Cell::Cat(_), ColumnKind::Categorical)
                | (Cell::Date(_), ColumnKind::Date)
                | (Cell::Time(_), ColumnKind::Time)
        )
    }

    pub fn as_date(&self) -> Option<NaiveDate> {
        match self {
            Cell::Date(d) => Some(*d),
            _ => None,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Int(v) => Some(*v as f64),
            Cell::Float(v) => Some(*v),
            Cell::Bool(b) => Some(if *b { 1.0 } else { 0.0 }),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Cell::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Cell::Ident(s) | Cell::Cat(s) => Some(s),
            _ => None,
        }
    }
}

impl fmt::Display for Cell {
    /// CSV text form: empty string for missing, "true"/"false" booleans,
    /// ISO-8601 dates, HH:MM:SS times.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Missing => Ok(()),
            Cell::Ident(s) | Cell::Cat(s) => write!(f, "{s}"),
            Cell::Bool(b) => write!(f, "{b}"),
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Float(v) => write!(f, "{v}"),
            Cell::Date(d) => write!(f, "{}", d.format("%Y-%m-%d")),
            Cell::Time(t) => write!(f, "{}", t.format("%H:%M:%S")),
        }
    }
}

/// Ordered column declarations for one table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    columns: Vec<(String, ColumnKind)>,
}

impl Schema {
    pub fn new(columns: Vec<(String, ColumnKind)>) -> Self {
        Schema { columns }
    }

    pub fn names(&self) -> Vec<String> {
        self.columns.iter().map(|(n, _)| n.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn columns(&self) -> &[(String, ColumnKind)] {
        &self.columns
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|(n, _)| n == name)
    }

    fn parse_cell(&self, col: usize, text: &str, row: usize) -> Result<Cell> {
        if text.is_empty() {
            return Ok(Cell::Missing);
        }
        let (name, kind) = &self.columns[col];
        let bad = |reason: &str| Error::BadCell {
            row,
            column: name.clone(),
            text: text.to_string(),
            reason: reason.to_string(),
        };
        match kind {
            ColumnKind::Identifier => Ok(Cell::Ident(text.to_string())),
            ColumnKind::Categorical => Ok(Cell::Cat(text.to_string())),
            ColumnKind::Boolean => match text {
                "true" => Ok(Cell::Bool(true)),
                "false" => Ok(Cell::Bool(false)),
                _ => Err(bad("expected \"true\" or \"false\"")),
            },
            ColumnKind::Integer => text
                .parse::<i64>()
                .map(Cell::Int)
                .map_err(|e| bad(&e.to_string())),
            ColumnKind::Float => text
                .parse::<f64>()
                .map(Cell::Float)
                .map_err(|e| bad(&e.to_string())),
            ColumnKind::Date => NaiveDate::parse_from_str(text, "%Y-%m-%d")
                .map(Cell::Date)
                .map_err(|e| bad(&e.to_string())),
            ColumnKind::Time => NaiveTime::parse_from_str(text, "%H:%M:%S")
                .map(Cell::Time)
                .map_err(|e| bad(&e.to_string())),
        }
    }
}

/// An immutable typed table: named columns with kind-checked cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    name: String,
    schema: Schema,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: impl Into<String>, schema: Schema) -> Self {
        Table {
            name: name.into(),
            schema,
            rows: Vec::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Cell]> {
        self.rows.iter().map(|r| r.as_slice())
    }

    pub fn row(&self, i: usize) -> &[Cell] {
        &self.rows[i]
    }

    /// Appends a row after checking arity and per-column kinds.
    pub fn push_row(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.schema.len() {
            return Err(Error::Data(format!(
                "table {:?}: row has {} cells, schema has {} columns",
                self.name,
                row.len(),
                self.schema.len()
            )));
        }
        for (i, cell) in row.iter().enumerate() {
            let (name, kind) = &self.schema.columns()[i];
            if !cell.conforms(*kind) {
                return Err(Error::Data(format!(
                    "table {:?}: cell {cell:?} does not conform to column {name:?} ({kind:?})",
                    self.name
                )));
            }
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.schema
            .index_of(name)
            .ok_or_else(|| Error::MissingColumn(name.to_string()))
    }

    pub fn column(&self, name: &str) -> Result<impl Iterator<Item = &Cell>> {
        let idx = self.column_index(name)?;
        Ok(self.rows.iter().map(move |r| &r[idx]))
    }

    pub fn cell(&self, row: usize, name: &str) -> Result<&Cell> {
        let idx = self.column_index(name)?;
        Ok(&self.rows[row][idx])
    }

    pub fn n_missing(&self) -> usize {
        self.rows
            .iter()
            .flat_map(|r| r.iter())
            .filter(|c| c.is_missing())
            .count()
    }

    /// Parses a CSV file against `schema`. The header row must match the
    /// schema names exactly, in order.
    pub fn load_csv(path: impl AsRef<Path>, name: impl Into<String>, schema: Schema) -> Result<Table> {
        let path = path.as_ref();
        let mut reader = csv::ReaderBuilder::new().flexible(false).from_path(path)?;
        let found: Vec<String> = reader.headers()?.iter().map(|s| s.to_string()).collect();
        let expected = schema.names();
        if found != expected {
            return Err(Error::HeaderMismatch {
                path: path.display().to_string(),
                expected,
                found,
            });
        }
        let mut table = Table::new(name, schema);
        for (i, record) in reader.records().enumerate() {
            let record = record?;
            let mut row = Vec::with_capacity(table.schema.len());
            for (col, text) in record.iter().enumerate() {
                // data row number: 1-based, excluding the header
                row.push(table.schema.parse_cell(col, text, i + 1)?);
            }
            table.rows.push(row);
        }
        Ok(table)
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut writer = csv::Writer::from_path(path.as_ref())?;
        writer.write_record(self.schema.names())?;
        for row in &self.rows {
            writer.write_record(row.iter().map(|c| c.to_string()))?;
        }
        writer.flush()?;
        Ok(())
    }
}

/// Replaces a float column with a boolean column of the same name, true where
/// the predicate holds. Missing cells stay missing.
pub fn binarize_column(
    table: &Table,
    column: &str,
    predicate: impl Fn(f64) -> bool,
) -> Result<Table> {
    let idx = table.column_index(column)?;
    let mut columns = table.schema.columns().to_vec();
    columns[idx].1 = ColumnKind::Boolean;
    let mut out = Table::new(table.name.clone(), Schema::new(columns));
    for (i, row) in table.rows().enumerate() {
        let mut row = row.to_vec();
        row[idx] = match &row[idx] {
            Cell::Missing => Cell::Missing,
            cell => {
                let v = cell.as_f64().ok_or_else(|| Error::BadCell {
                    row: i + 1,
                    column: column.to_string(),
                    text: cell.to_string(),
                    reason: "not numeric".to_string(),
                })?;
                Cell::Bool(predicate(v))
            }
        };
        out.push_row(row)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn schema() -> Schema {
        Schema::new(vec![
            ("id".into(), ColumnKind::Identifier),
            ("dose".into(), ColumnKind::Float),
            ("when".into(), ColumnKind::Date),
        ])
    }

    #[test]
    fn empty_file_with_valid_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        std::fs::write(&path, "id,dose,when\n").unwrap();
        let t = Table::load_csv(&path, "t", schema()).unwrap();
        assert_eq!(t.n_rows(), 0);
    }

    #[test]
    fn blank_numeric_cell_is_missing() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let mut f = std::fs::File::create(&path).unwrap();
        writeln!(f, "id,dose,when").unwrap();
        writeln!(f, "a,1.5,2020-01-01").unwrap();
        writeln!(f, "b,,2020-01-02").unwrap();
        writeln!(f, "c,2.25,2020-01-03").unwrap();
        drop(f);
        let t = Table::load_csv(&path, "t", schema()).unwrap();
        assert_eq!(t.n_rows(), 3);
        assert_eq!(t.n_missing(), 1);
        assert!(t.cell(1, "dose").unwrap().is_missing());
    }

    #[test]
    fn header_mismatch_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        std::fs::write(&path, "id,amount,when\n").unwrap();
        let err = Table::load_csv(&path, "t", schema()).unwrap_err();
        assert!(matches!(err, Error::HeaderMismatch { .. }));
    }

    #[test]
    fn bad_cell_reports_row_and_column() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        std::fs::write(&path, "id,dose,when\na,oops,2020-01-01\n").unwrap();
        match Table::load_csv(&path, "t", schema()).unwrap_err() {
            Error::BadCell { row, column, text, .. } => {
                assert_eq!(row, 1);
                assert_eq!(column, "dose");
                assert_eq!(text, "oops");
            }
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn missing_file() {
        let err = Table::load_csv("/nonexistent/t.csv", "t", schema()).unwrap_err();
        assert!(matches!(err, Error::Csv(_)));
    }

    #[test]
    fn round_trip_is_byte_stable() {
        let mut t = Table::new("t", schema());
        t.push_row(vec![
            Cell::Ident("a".into()),
            Cell::Float(1.5),
            Cell::Date(NaiveDate::from_ymd_opt(2020, 1, 1).unwrap()),
        ])
        .unwrap();
        t.push_row(vec![
            Cell::Ident("b".into()),
            Cell::Float(0.3333333333333333),
            Cell::Date(NaiveDate::from_ymd_opt(2021, 12, 31).unwrap()),
        ])
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p1 = dir.path().join("a.csv");
        let p2 = dir.path().join("b.csv");
        t.write_csv(&p1).unwrap();
        let back = Table::load_csv(&p1, "t", schema()).unwrap();
        assert_eq!(t, back);
        back.write_csv(&p2).unwrap();
        assert_eq!(
            std::fs::read(&p1).unwrap(),
            std::fs::read(&p2).unwrap()
        );
    }

    #[test]
    fn push_row_rejects_kind_mismatch() {
        let mut t = Table::new("t", schema());
        let err = t
            .push_row(vec![
                Cell::Ident("a".into()),
                Cell::Cat("nope".into()),
                Cell::Missing,
            ])
            .unwrap_err();
        assert!(matches!(err, Error::Data(_)));
    }
}
