//! Bit-stable CSV and JSON report tables.

use std::path::Path;

use serde_json::{Map, Value};

use crate::config::Format;
use crate::CliError;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Text(String),
    Int(i64),
    Real(f64),
    Flag(Option<bool>),
}

impl Cell {
    /// CSV text: reals in scientific notation with 17 significant digits.
    pub fn render(&self) -> String {
        match self {
            Self::Text(s) => s.clone(),
            Self::Int(i) => i.to_string(),
            Self::Real(x) => format!("{x:.16e}"),
            Self::Flag(Some(b)) => b.to_string(),
            Self::Flag(None) => String::new(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Self::Text(s) => Value::String(s.clone()),
            Self::Int(i) => Value::from(*i),
            Self::Real(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Self::Flag(b) => b.map_or(Value::Null, Value::Bool),
        }
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Self::Text(s.to_owned())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Self::Text(s)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Self::Real(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Self::Int(i as i64)
    }
}

impl From<u32> for Cell {
    fn from(i: u32) -> Self {
        Self::Int(i64::from(i))
    }
}

impl From<u64> for Cell {
    fn from(i: u64) -> Self {
        Self::Int(i as i64)
    }
}

impl From<Option<bool>> for Cell {
    fn from(b: Option<bool>) -> Self {
        Self::Flag(b)
    }
}

/// Rows of one task. Every row starts with the task name and inputs digest.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    task: String,
    digest: String,
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(task: &str, digest: &str, columns: &[&'static str]) -> Self {
        Self { task: task.to_owned(), digest: digest.to_owned(), columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the columns");
        let mut full = vec![Cell::Text(self.task.clone()), Cell::Text(self.digest.clone())];
        full.extend(row);
        self.rows.push(full);
    }

    /// Marker row closing a partial report.
    pub fn push_failure(&mut self, message: &str) {
        let mut row = vec![Cell::from("failed"), Cell::Text(self.digest.clone()), Cell::Text(message.to_owned())];
        row.resize(self.columns.len() + 2, Cell::Text(String::new()));
        self.rows.push(row);
    }

    pub fn header(&self) -> Vec<&str> {
        let mut h = vec!["task", "digest"];
        h.extend(self.columns.iter().copied());
        h
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        if self.is_empty() {
            return Err(CliError::Precondition("refusing to emit an empty report".into()));
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(self.header()).map_err(io_error)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(io_error)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        if self.is_empty() {
            return Err(CliError::Precondition("refusing to emit an empty report".into()));
        }
        let header = self.header();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = header.iter().zip(row).map(|(k, v)| ((*k).to_owned(), v.to_json())).collect();
                Value::Object(obj)
            })
            .collect();
        Ok(serde_json::to_string_pretty(&rows).expect("report rows serialize") + "\n")
    }

    pub fn emit(&self, path: &Path, format: Format) -> Result<(), CliError> {
        let text = match format {
            Format::Csv => self.to_csv()?,
            Format::Json => self.to_json()?,
        };
        std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    }
}

fn io_error(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new("demo", "abc", &["name", "value", "passed"]);
        t.push(vec!["x".into(), 0.1.into(), Some(true).into()]);
        t.push(vec!["y,z".into(), (-2.5e-300).into(), None.into()]);
        t
    }

    #[test]
    fn csv_uses_fixed_float_format() {
        let csv = sample().to_csv().unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "task,digest,name,value,passed");
        assert_eq!(lines[1], "demo,abc,x,1.0000000000000001e-1,true");
        assert_eq!(lines[2], "demo,abc,\"y,z\",-2.5000000000000000e-300,");
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn csv_reals_round_trip() {
        for x in [0.1, 1.0 / 3.0, std::f64::consts::PI * 1e17, 5e-324] {
            assert_eq!(Cell::Real(x).render().parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn json_round_trips() {
        let t = sample();
        let parsed: Vec<Map<String, Value>> = serde_json::from_str(&t.to_json().unwrap()).unwrap();
        assert_eq!(parsed.len(), 2);
        assert_eq!(parsed[0]["value"].as_f64(), Some(0.1));
        assert_eq!(parsed[1]["passed"], Value::Null);
    }

    #[test]
    fn empty_report_is_rejected() {
        let t = Table::new("demo", "abc", &["a"]);
        assert!(matches!(t.to_csv(), Err(CliError::Precondition(_))));
        assert!(t.to_json().is_err());
    }

    #[test]
    fn failure_marker_fills_row() {
        let mut t = sample();
        t.push_failure("boom");
        assert_eq!(t.rows().last().unwrap().len(), 5);
        assert!(t.to_csv().unwrap().ends_with("failed,abc,boom,,\n"));
    }
}
