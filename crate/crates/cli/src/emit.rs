//! JSON and CSV writers. Floats are printed with 17 significant digits;
//! non-finite values become `null` in JSON and empty cells in CSV.

use serde::Serialize;
use serde_json::{Map, Number, Value};

use crate::error::CliResult;

/// `1.2345678901234567e-3` style, round-trips any `f64`.
pub fn fmt_f64(x: f64) -> String {
    let s = format!("{x:.16e}");
    match s.split_once('e') {
        Some((mant, exp)) if !exp.starts_with('-') => format!("{mant}e+{exp}"),
        _ => s,
    }
}

pub fn number(x: f64) -> Value {
    if x.is_finite() {
        // arbitrary_precision keeps the digits exactly as written
        Value::Number(fmt_f64(x).parse::<Number>().expect("formatted float is valid JSON"))
    } else {
        Value::Null
    }
}

/// Serialize and re-print every float in fixed precision.
pub fn to_value<T: Serialize>(x: &T) -> Value {
    normalize(serde_json::to_value(x).expect("report types serialize"))
}

pub fn normalize(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => number(n.as_f64().unwrap_or(f64::NAN)),
        Value::Array(a) => Value::Array(a.into_iter().map(normalize).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, normalize(v))).collect()),
        other => other,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) if x.is_finite() => fmt_f64(*x),
            Cell::Num(_) => String::new(),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// One row from a flat or nested object, columns in key order with
    /// nested keys joined by `.`.
    pub fn single_row(results: &Value) -> Self {
        let mut t = Table::default();
        let mut row = Vec::new();
        flatten("", results, &mut t.header, &mut row);
        t.rows.push(row);
        t
    }
}

fn flatten(prefix: &str, v: &Value, header: &mut Vec<String>, row: &mut Vec<Cell>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(o) => {
            for (k, v) in o {
                flatten(&key(k), v, header, row);
            }
        }
        Value::Array(a) => {
            for (i, v) in a.iter().enumerate() {
                flatten(&key(&i.to_string()), v, header, row);
            }
        }
        other => {
            header.push(prefix.to_string());
            row.push(match other {
                Value::Null => Cell::Text(String::new()),
                Value::Bool(b) => Cell::Text(b.to_string()),
                Value::Number(n) => match n.as_u64() {
                    Some(u) if !n.is_f64() => Cell::Int(u),
                    _ => Cell::Num(n.as_f64().unwrap_or(f64::NAN)),
                },
                Value::String(s) => Cell::Text(s.clone()),
                _ => unreachable!(),
            });
        }
    }
}

pub fn json_document(doc: &Map<String, Value>) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("json values serialize");
    s.push('\n');
    s
}

pub fn csv_document(table: &Table) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&table.header)?;
    for row in &table.rows {
        w.write_record(row.iter().map(Cell::render))?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
