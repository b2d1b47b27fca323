//! JSON and RFC 4180 CSV rendering of command results.

use crate::args::Format;
use crate::error::{CliError, CliResult};
use serde_json::{Map, Value};
use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

/// A rectangular result: one header and one record per row.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// A command result. `table` is the CSV rendering when the natural shape of
/// the result is a list of records; otherwise the JSON object is flattened
/// into a single CSV row.
#[derive(Debug, Clone)]
pub struct Report {
    pub json: Value,
    pub table: Option<Table>,
    /// False if the command ran but found a failure (verification).
    pub success: bool,
}

impl Report {
    pub fn json(json: Value) -> Self {
        Report { json, table: None, success: true }
    }
}

/// Shortest round-trip decimal form of a double, in exponent notation
/// outside `[1e-4, 1e16)` so that tiny errors stay readable.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-4..1e16).contains(&a) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

/// Stable string form of a JSON scalar; nested values are embedded as JSON.
pub fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Bool(_) | Value::Number(_) => v.to_string(),
        _ => v.to_string(),
    }
}

/// Flattens nested objects with dotted keys; arrays stay JSON-encoded.
pub fn flatten(v: &Value) -> Table {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        match v {
            Value::Object(map) => {
                for (k, x) in map {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&key, x, out);
                }
            }
            _ => out.push((prefix.to_string(), cell(v))),
        }
    }
    let mut pairs = Vec::new();
    walk("", v, &mut pairs);
    let (header, row) = pairs.into_iter().unzip();
    Table { header, rows: vec![row] }
}

pub fn table_to_json(t: &Table) -> Value {
    Value::Array(
        t.rows
            .iter()
            .map(|r| Value::Object(t.header.iter().cloned().zip(r.iter().map(|c| Value::String(c.clone()))).collect::<Map<_, _>>()))
            .collect(),
    )
}

pub fn write_csv<W: Write>(t: &Table, w: W) -> CliResult<()> {
    let mut wr = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(w);
    wr.write_record(&t.header)?;
    for r in &t.rows {
        wr.write_record(r)?;
    }
    wr.flush().map_err(|e| CliError::Output(e.to_string()))
}

pub fn emit(report: &Report, format: Format, path: Option<&Path>) -> CliResult<()> {
    let sink: Box<dyn Write> = match path {
        Some(p) => Box::new(File::create(p).map_err(|e| CliError::Output(format!("{}: {e}", p.display())))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut sink = io::BufWriter::new(sink);
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut sink, &report.json).map_err(|e| CliError::Output(e.to_string()))?;
            writeln!(sink).map_err(|e| CliError::Output(e.to_string()))?;
        }
        Format::Csv => match &report.table {
            Some(t) => write_csv(t, &mut sink)?,
            None => write_csv(&flatten(&report.json), &mut sink)?,
        },
    }
    sink.flush().map_err(|e| CliError::Output(e.to_string()))
}
