//! Rectangular result tables with a provenance block, and their CSV and JSON
//! renderings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Where a table came from: the producing operation, its inputs verbatim,
/// grid size and the tolerances it worked to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub operation: String,
    pub parameters: BTreeMap<String, String>,
    pub grid: Option<u64>,
    pub tolerances: BTreeMap<String, f64>,
    pub version: String,
}

impl Provenance {
    pub fn new(operation: impl Into<String>) -> Self {
        Provenance {
            operation: operation.into(),
            parameters: BTreeMap::new(),
            grid: None,
            tolerances: BTreeMap::new(),
            version: TOOLKIT_VERSION.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanTable {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
    pub meta: Provenance,
}

impl ScanTable {
    pub fn new<S: Into<String>>(operation: &str, columns: impl IntoIterator<Item = S>) -> Result<Self> {
        let columns: Vec<String> = columns.into_iter().map(Into::into).collect();
        for (i, c) in columns.iter().enumerate() {
            if c.is_empty() {
                return Err(Error::InvalidTable("column names must be non-empty".into()));
            }
            if columns[..i].contains(c) {
                return Err(Error::InvalidTable(format!("duplicate column '{c}'")));
            }
        }
        Ok(ScanTable {
            columns,
            rows: Vec::new(),
            meta: Provenance::new(operation),
        })
    }

    pub fn push_row(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::InvalidTable(format!(
                "row has {} values for {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        if row.iter().any(|v| v.is_nan()) {
            return Err(Error::InvalidTable("NaN values are not representable".into()));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn with_parameter(mut self, key: &str, value: impl ToString) -> Self {
        self.meta.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn with_tolerance(mut self, key: &str, value: f64) -> Self {
        self.meta.tolerances.insert(key.to_string(), value);
        self
    }

    pub fn with_grid(mut self, grid: u64) -> Self {
        self.meta.grid = Some(grid);
        self
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// All values of one column.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// Same columns and bitwise-identical values (metadata ignored).
    pub fn same_data(&self, other: &ScanTable) -> bool {
        self.columns == other.columns
            && self.rows.len() == other.rows.len()
            && self
                .rows
                .iter()
                .zip(&other.rows)
                .all(|(a, b)| a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits()))
    }
}

/// 17 significant digits, enough to round-trip any double.
pub fn format_value(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{v:.16e}")
    }
}

fn parse_value(s: &str) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::InvalidTable(format!("cannot parse '{s}' as a number")))?;
    if v.is_nan() {
        return Err(Error::InvalidTable("NaN values are not representable".into()));
    }
    Ok(v)
}

fn csv_error(e: csv::Error) -> Error {
    Error::InvalidTable(e.to_string())
}

/// Header row then one line per row, LF terminated.
pub fn to_csv(t: &ScanTable) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(&t.columns).expect("writing to memory");
    for row in &t.rows {
        w.write_record(row.iter().map(|&v| format_value(v))).expect("writing to memory");
    }
    w.into_inner().expect("flushing to memory")
}

/// Parses the output of [`to_csv`]; the provenance block is not carried by
/// CSV and comes back empty.
pub fn from_csv(bytes: &[u8]) -> Result<ScanTable> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(bytes);
    let header: Vec<String> = r.headers().map_err(csv_error)?.iter().map(str::to_string).collect();
    let mut t = ScanTable::new("csv", header)?;
    for rec in r.records() {
        let rec = rec.map_err(csv_error)?;
        t.push_row(rec.iter().map(parse_value).collect::<Result<_>>()?)?;
    }
    Ok(t)
}

fn json_value(v: f64) -> Value {
    if v.is_finite() {
        Value::from(v)
    } else if v > 0.0 {
        Value::from("inf")
    } else {
        Value::from("-inf")
    }
}

fn json_number(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| Error::InvalidTable(format!("unrepresentable number {n}"))),
        Value::String(s) if s == "inf" => Ok(f64::INFINITY),
        Value::String(s) if s == "-inf" => Ok(f64::NEG_INFINITY),
        other => Err(Error::InvalidTable(format!("expected a number, found {other}"))),
    }
}

#[derive(Serialize, Deserialize)]
struct JsonTable {
    meta: Provenance,
    columns: Vec<String>,
    rows: Vec<Vec<Value>>,
}

/// `{"meta":…,"columns":[…],"rows":[[…]]}` followed by a newline.
pub fn to_json(t: &ScanTable) -> Vec<u8> {
    let doc = JsonTable {
        meta: t.meta.clone(),
        columns: t.columns.clone(),
        rows: t.rows.iter().map(|r| r.iter().map(|&v| json_value(v)).collect()).collect(),
    };
    let mut out = serde_json::to_vec(&doc).expect("serializing plain data");
    out.push(b'\n');
    out
}

pub fn from_json(bytes: &[u8]) -> Result<ScanTable> {
    let doc: JsonTable = serde_json::from_slice(bytes).map_err(|e| Error::InvalidTable(e.to_string()))?;
    let mut t = ScanTable::new(&doc.meta.operation, doc.columns)?;
    t.meta = doc.meta;
    for row in &doc.rows {
        t.push_row(row.iter().map(json_number).collect::<Result<_>>()?)?;
    }
    Ok(t)
}
