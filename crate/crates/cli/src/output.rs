//! Tables and their CSV / JSON renderings.

use std::io::Write;

use serde_json::{Map, Value};

use crate::config::Format;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
    /// Nested data: an object in JSON, its compact text in CSV.
    Json(Value),
    Empty,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &'static str, columns: &[&'static str]) -> Self {
        Table { name, columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Decimal with 12 significant digits; exponent form outside `[1e−5, 1e12)`.
pub fn sig12(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    // Round first so that the exponent of e.g. 9.9999999999996 is right.
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..12).contains(&exp) {
        return format!("{}e{exp}", trim(mantissa));
    }
    let decimals = (11 - exp).max(0) as usize;
    trim(&format!("{x:.decimals$}")).to_string()
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn csv_cell(c: &Cell) -> String {
    match c {
        Cell::Int(i) => i.to_string(),
        Cell::Num(x) => sig12(*x),
        Cell::Text(s) => s.clone(),
        Cell::Json(v) => v.to_string(),
        Cell::Empty => String::new(),
    }
}

fn json_cell(c: &Cell) -> Value {
    match c {
        Cell::Int(i) => Value::from(*i),
        Cell::Num(x) if x.is_finite() => Value::from(*x),
        Cell::Num(x) => Value::from(sig12(*x)),
        Cell::Text(s) => Value::from(s.clone()),
        Cell::Json(v) => v.clone(),
        Cell::Empty => Value::Null,
    }
}

pub fn render(tables: &[Table], format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Csv => {
            let mut out = Vec::new();
            for (k, t) in tables.iter().enumerate() {
                if k > 0 {
                    out.push(b'\n');
                }
                let mut w = csv::Writer::from_writer(Vec::new());
                let io = |e: csv::Error| CliError::Output(e.to_string());
                w.write_record(&t.columns).map_err(io)?;
                for row in &t.rows {
                    w.write_record(row.iter().map(csv_cell)).map_err(io)?;
                }
                out.extend(w.into_inner().map_err(|e| CliError::Output(e.to_string()))?);
            }
            Ok(out)
        }
        Format::Json => {
            let mut root = Map::new();
            for t in tables {
                let rows: Vec<Value> = t
                    .rows
                    .iter()
                    .map(|r| {
                        Value::Object(t.columns.iter().zip(r).map(|(k, c)| (k.to_string(), json_cell(c))).collect())
                    })
                    .collect();
                root.insert(t.name.to_string(), Value::Array(rows));
            }
            let mut out =
                serde_json::to_vec_pretty(&Value::Object(root)).map_err(|e| CliError::Output(e.to_string()))?;
            out.push(b'\n');
            Ok(out)
        }
    }
}

/// Writes to `path`, or to stdout when it is absent or `-`.
pub fn write(bytes: &[u8], path: Option<&str>) -> Result<(), CliError> {
    match path.filter(|&p| p != "-") {
        Some(p) => std::fs::write(p, bytes).map_err(|e| CliError::Output(format!("{p}: {e}"))),
        None => std::io::stdout().write_all(bytes).map_err(|e| CliError::Output(e.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig12(2.0 / 3.0), "0.666666666667");
        assert_eq!(sig12(8.0 / 3.0), "2.66666666667");
        assert_eq!(sig12(4.0), "4");
        assert_eq!(sig12(-0.125), "-0.125");
        assert_eq!(sig12(1e-7), "1e-7");
        assert_eq!(sig12(1.0 / 3.0 * 1e-9), "3.33333333333e-10");
        assert_eq!(sig12(123456789012345.0), "1.23456789012e14");
        assert_eq!(sig12(9.9999999999996), "10");
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig12(f64::INFINITY), "inf");
    }

    #[test]
    fn csv_and_json() {
        let mut t = Table::new("rows", &["a", "b", "c"]);
        t.push(vec![Cell::Int(1), Cell::Num(0.5), Cell::Text("x,y".into())]);
        let csv = String::from_utf8(render(&[t.clone()], Format::Csv).unwrap()).unwrap();
        assert_eq!(csv, "a,b,c\n1,0.5,\"x,y\"\n");
        let json: Value = serde_json::from_slice(&render(&[t], Format::Json).unwrap()).unwrap();
        assert_eq!(json["rows"][0]["b"], Value::from(0.5));
    }
}
