//! Experiment reports: typed columns with provenance, rows of cells, gate
//! outcomes and run metadata, written as CSV or versioned JSON.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, HarnessResult};

/// Version of the JSON layout and of `schema/report-columns.json`.
pub const SCHEMA_VERSION: u32 = 1;

/// Where a column's numbers come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Input parameters and labels.
    Parameter,
    /// Exact enumeration.
    OracleExact,
    /// Closed-form estimate.
    Formula,
    /// Sampling.
    MonteCarlo,
}

/// Static description of one report column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColumnSpec {
    pub name: &'static str,
    pub provenance: Provenance,
    pub description: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    pub provenance: Provenance,
}

impl From<&ColumnSpec> for Column {
    fn from(c: &ColumnSpec) -> Self {
        Column { name: c.name.to_string(), provenance: c.provenance }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Bool(bool),
    Int(i64),
    Float(f64),
    Text(String),
    Missing,
}

impl Cell {
    /// Non-finite values become [`Cell::Missing`] so JSON stays lossless.
    pub fn float(x: f64) -> Cell {
        if x.is_finite() {
            Cell::Float(x)
        } else {
            Cell::Missing
        }
    }

    pub fn int(x: impl TryInto<i64>) -> Cell {
        x.try_into().map(Cell::Int).unwrap_or(Cell::Missing)
    }

    pub fn text(s: impl Into<String>) -> Cell {
        Cell::Text(s.into())
    }

    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::Float(x) => Some(x),
            Cell::Int(x) => Some(x as f64),
            _ => None,
        }
    }

    fn to_csv_field(&self) -> String {
        match self {
            Cell::Bool(b) => b.to_string(),
            Cell::Int(x) => x.to_string(),
            Cell::Float(x) => x.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }
}

/// A pass/fail check evaluated over the rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatReport {
    pub schema_version: u32,
    pub experiment: String,
    pub metadata: BTreeMap<String, String>,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
    pub gates: Vec<Gate>,
    /// Wall-clock time of the run; never serialized so reports stay
    /// reproducible byte for byte.
    #[serde(skip)]
    pub runtime: Option<Duration>,
}

impl StatReport {
    pub fn new(experiment: &str, columns: &[ColumnSpec]) -> Self {
        StatReport {
            schema_version: SCHEMA_VERSION,
            experiment: experiment.to_string(),
            metadata: BTreeMap::new(),
            columns: columns.iter().map(Column::from).collect(),
            rows: Vec::new(),
            gates: Vec::new(),
            runtime: None,
        }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.metadata.insert(key.to_string(), value.to_string());
    }

    /// Appends a row; panics if its width differs from the header.
    pub fn push_row(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the {} columns", self.columns.len());
        self.rows.push(row);
    }

    pub fn gate(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.gates.push(Gate { name: name.to_string(), passed, detail: detail.into() });
    }

    pub fn passed(&self) -> bool {
        self.gates.iter().all(|g| g.passed)
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    /// All cells of one column.
    pub fn column(&self, name: &str) -> Vec<&Cell> {
        match self.column_index(name) {
            Some(i) => self.rows.iter().map(|r| &r[i]).collect(),
            None => Vec::new(),
        }
    }

    pub fn to_csv(&self) -> HarnessResult<String> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        let enc = |e: csv::Error| HarnessError::Encoding(e.to_string());
        w.write_record(self.columns.iter().map(|c| c.name.as_str())).map_err(enc)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::to_csv_field)).map_err(enc)?;
        }
        let bytes = w.into_inner().map_err(|e| HarnessError::Encoding(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| HarnessError::Encoding(e.to_string()))
    }

    pub fn to_json(&self) -> HarnessResult<String> {
        serde_json::to_string_pretty(self).map(|s| s + "\n").map_err(|e| HarnessError::Encoding(e.to_string()))
    }

    pub fn from_json(text: &str) -> HarnessResult<Self> {
        let r: StatReport = serde_json::from_str(text).map_err(|e| HarnessError::Encoding(e.to_string()))?;
        if r.schema_version != SCHEMA_VERSION {
            return Err(HarnessError::Encoding(format!(
                "report schema version {} (expected {SCHEMA_VERSION})",
                r.schema_version
            )));
        }
        Ok(r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn render(self, report: &StatReport) -> HarnessResult<String> {
        match self {
            Format::Csv => report.to_csv(),
            Format::Json => report.to_json(),
        }
    }
}

pub fn write_report(report: &StatReport, format: Format, path: &Path) -> HarnessResult<()> {
    fs::write(path, format.render(report)?).map_err(|e| HarnessError::io(path, e))
}

pub fn read_json_report(path: &Path) -> HarnessResult<StatReport> {
    let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    StatReport::from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const COLS: &[ColumnSpec] = &[
        ColumnSpec { name: "n", provenance: Provenance::Parameter, description: "vertices" },
        ColumnSpec { name: "value", provenance: Provenance::Formula, description: "a value" },
        ColumnSpec { name: "note", provenance: Provenance::Parameter, description: "free text" },
    ];

    #[test]
    fn empty_report_is_header_only() {
        let r = StatReport::new("demo", COLS);
        assert_eq!(r.to_csv().unwrap(), "n,value,note\n");
    }

    #[test]
    fn json_round_trip() {
        let mut r = StatReport::new("demo", COLS);
        r.meta("seed", 7);
        r.push_row(vec![Cell::int(6), Cell::float(0.1 + 0.2), Cell::text("a,b")]);
        r.push_row(vec![Cell::int(8), Cell::float(f64::NAN), Cell::Bool(true)]);
        r.gate("ok", true, "fine");
        let back = StatReport::from_json(&r.to_json().unwrap()).unwrap();
        assert_eq!(back, r);
        assert_eq!(r.rows[1][1], Cell::Missing);
        assert_eq!(r.to_csv().unwrap(), "n,value,note\n6,0.30000000000000004,\"a,b\"\n8,,true\n");
    }

    #[test]
    fn floats_survive_json_exactly() {
        let mut r = StatReport::new("demo", &COLS[..2]);
        let mut x = 1.8442310623380582f64;
        for i in 0..200 {
            r.push_row(vec![Cell::int(i), Cell::float(x)]);
            x = x * 1.6180339887 + 1e-7;
        }
        assert_eq!(StatReport::from_json(&r.to_json().unwrap()).unwrap(), r);
    }

    #[test]
    fn runtime_is_not_serialized() {
        let mut r = StatReport::new("demo", COLS);
        let plain = r.to_json().unwrap();
        r.runtime = Some(Duration::from_millis(1234));
        assert_eq!(r.to_json().unwrap(), plain);
    }

    #[test]
    fn rejects_other_schema_versions() {
        let mut r = StatReport::new("demo", COLS);
        r.schema_version = 99;
        let text = serde_json::to_string(&r).unwrap();
        assert!(StatReport::from_json(&text).is_err());
    }

    #[test]
    #[should_panic(expected = "row width")]
    fn row_width_is_checked() {
        StatReport::new("demo", COLS).push_row(vec![Cell::int(1)]);
    }
}
