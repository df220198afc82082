//! Experiment reports and their JSON/CSV serializations.

use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::{CompactFormatter, Formatter};
use serde_json::{Map, Value};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    /// 0 on pass, 2 on fail, 3 when inconclusive.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 2,
            Verdict::Inconclusive => 3,
        }
    }

    pub fn from_checks(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

pub type Row = Map<String, Value>;

/// Builds a row from a `json!` object literal.
pub fn row(value: Value) -> Row {
    match value {
        Value::Object(map) => map,
        other => panic!("row expects a JSON object, got {other}"),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub command: String,
    pub parameters: Map<String, Value>,
    pub rows: Vec<Row>,
    pub verdict: Verdict,
    pub tolerances: Map<String, Value>,
    /// Fitted slopes, limit constants and other whole-experiment outputs.
    pub summary: Map<String, Value>,
}

impl ExperimentReport {
    pub fn new(command: &str, parameters: Value) -> Self {
        ExperimentReport {
            command: command.to_string(),
            parameters: row(parameters),
            rows: Vec::new(),
            verdict: Verdict::Inconclusive,
            tolerances: Map::new(),
            summary: Map::new(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut out, SignificantDigits);
        self.serialize(&mut ser).expect("reports serialize to memory");
        out.push(b'\n');
        String::from_utf8(out).expect("JSON is UTF-8")
    }

    /// One record per row; the header is the key order of the first row.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let header: Vec<&String> = self.rows.first().map(|r| r.keys().collect()).unwrap_or_default();
        let csv_err = |e: csv::Error| Error::Parse(format!("CSV output: {e}"));
        if !header.is_empty() {
            w.write_record(&header).map_err(csv_err)?;
        }
        for r in &self.rows {
            let record: Vec<String> = header.iter().map(|k| csv_cell(r.get(*k))).collect();
            w.write_record(&record).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Parse(format!("CSV output: {e}")))?;
        Ok(String::from_utf8(bytes).expect("CSV is UTF-8"))
    }
}

/// `x` with 17 significant digits, the form used in every report.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(Value::Number(n)) if n.is_f64() => format_f64(n.as_f64().unwrap_or(f64::NAN)),
        Some(other) => other.to_string(),
    }
}

/// Compact JSON with every float written at 17 significant digits.
struct SignificantDigits;

impl Formatter for SignificantDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            writer.write_all(format_f64(value).as_bytes())
        } else {
            CompactFormatter.write_null(writer)
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}
