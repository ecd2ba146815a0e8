use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{Map, Value};

pub const SCHEMA_VERSION: &str = "1";

/// One table cell. Floats are written with 17 significant digits in CSV and
/// as shortest round-trip numbers in JSON; non-finite floats become `null`.
#[derive(Clone, Debug)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) if v.is_finite() => format!("{v:.16e}"),
            Cell::Float(_) => "nan".into(),
            Cell::Text(s) => quote(s),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Float(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn json_rows(&self) -> Vec<Map<String, Value>> {
        self.rows
            .iter()
            .map(|r| self.columns.iter().zip(r).map(|(c, v)| (c.to_string(), v.json())).collect())
            .collect()
    }
}

/// Result of one command: the main table and optional summary lines
/// (fitted slopes for `study`).
#[derive(Clone, Debug)]
pub struct Report {
    pub command: &'static str,
    pub params: BTreeMap<String, Value>,
    pub table: Table,
    pub summary: Option<Table>,
}

#[derive(Serialize)]
struct OutputRecord<'a> {
    schema_version: &'a str,
    command: &'a str,
    params: &'a BTreeMap<String, Value>,
    rows: Vec<Map<String, Value>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    summary: Option<Vec<Map<String, Value>>>,
}

impl Report {
    pub fn new(command: &'static str, table: Table) -> Self {
        Self {
            command,
            params: BTreeMap::new(),
            table,
            summary: None,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) {
        self.params.insert(key.to_string(), serde_json::to_value(value).expect("serializable"));
    }

    pub fn to_json(&self) -> String {
        let record = OutputRecord {
            schema_version: SCHEMA_VERSION,
            command: self.command,
            params: &self.params,
            rows: self.table.json_rows(),
            summary: self.summary.as_ref().map(Table::json_rows),
        };
        let mut s = serde_json::to_string_pretty(&record).expect("serializable");
        s.push('\n');
        s
    }

    /// Header row, data rows, then summary rows prefixed with `# `.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let line = |cells: Vec<String>| cells.join(",");
        writeln!(out, "{}", self.table.columns.join(",")).unwrap();
        for r in &self.table.rows {
            writeln!(out, "{}", line(r.iter().map(Cell::csv).collect())).unwrap();
        }
        if let Some(s) = &self.summary {
            writeln!(out, "# {}", s.columns.join(",")).unwrap();
            for r in &s.rows {
                writeln!(out, "# {}", line(r.iter().map(Cell::csv).collect())).unwrap();
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quotes_and_float_format() {
        let mut t = Table::new(&["a", "b", "c"]);
        t.push(vec![Cell::from(0.1), Cell::from("x, y"), Cell::Empty]);
        let r = Report::new("test", t);
        assert_eq!(r.to_csv(), "a,b,c\n1.0000000000000001e-1,\"x, y\",\n");
    }

    #[test]
    fn json_is_stable() {
        let mut t = Table::new(&["k", "v"]);
        t.push(vec![Cell::from(3usize), Cell::from(f64::NAN)]);
        let mut r = Report::new("test", t);
        r.param("nu", 0.5);
        let a = r.to_json();
        assert_eq!(a, r.to_json());
        let v: Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["rows"][0]["v"], Value::Null);
        assert_eq!(v["params"]["nu"], 0.5);
    }
}
