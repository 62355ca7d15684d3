//! Tabular output shared by every subcommand.
//!
//! Every row starts with the `schema` column. Floats use Rust's shortest
//! round-trip formatting so repeated runs are byte-identical; non-finite
//! values are written as the string `overflow` in both formats.

use std::io::Write;

use serde_json::{Map, Value as Json};

pub const SCHEMA: &str = "charlier-lattice/v1";

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Value {
    fn to_field(&self) -> String {
        match self {
            Value::Int(v) => v.to_string(),
            Value::Float(v) if v.is_finite() => format_float(*v),
            Value::Float(_) => "overflow".to_string(),
            Value::Text(s) => s.clone(),
        }
    }

    fn to_json(&self) -> Json {
        match self {
            Value::Int(v) => Json::from(*v),
            Value::Float(v) => serde_json::Number::from_f64(*v)
                .map(Json::Number)
                .unwrap_or_else(|| Json::String("overflow".into())),
            Value::Text(s) => Json::String(s.clone()),
        }
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

impl From<u32> for Value {
    fn from(v: u32) -> Self {
        Value::Int(i64::from(v))
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

/// Shortest round-trip digits; exponent notation away from `[1e-4, 1e15)`.
fn format_float(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row width does not match header");
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[Vec<Value>] {
        &self.rows
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }

    fn write_csv(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let header = std::iter::once("schema").chain(self.columns.iter().copied());
        w.write_record(header)?;
        for row in &self.rows {
            let fields = std::iter::once(SCHEMA.to_string()).chain(row.iter().map(Value::to_field));
            w.write_record(fields)?;
        }
        w.flush()
    }

    fn write_json(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let rows: Vec<Json> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                obj.insert("schema".into(), Json::String(SCHEMA.into()));
                for (k, v) in self.columns.iter().zip(row) {
                    obj.insert((*k).to_string(), v.to_json());
                }
                Json::Object(obj)
            })
            .collect();
        serde_json::to_writer_pretty(&mut *out, &rows)?;
        writeln!(out)
    }
}
