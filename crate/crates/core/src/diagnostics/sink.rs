//! Record sinks: NDJSON, CSV projection, in-memory.

use std::collections::BTreeMap;
use std::io::{self, Write};

use serde_json::Value;

use super::DiagnosticsRecord;

pub trait DiagnosticsSink {
    fn emit(&mut self, record: &DiagnosticsRecord) -> io::Result<()>;

    fn flush(&mut self) -> io::Result<()> {
        Ok(())
    }
}

impl DiagnosticsSink for Vec<DiagnosticsRecord> {
    fn emit(&mut self, record: &DiagnosticsRecord) -> io::Result<()> {
        self.push(record.clone());
        Ok(())
    }
}

pub struct NullSink;

impl DiagnosticsSink for NullSink {
    fn emit(&mut self, _record: &DiagnosticsRecord) -> io::Result<()> {
        Ok(())
    }
}

/// One JSON object per line.
pub struct NdjsonSink<W: Write> {
    out: W,
}

impl<W: Write> NdjsonSink<W> {
    pub fn new(out: W) -> Self {
        Self { out }
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

impl<W: Write> DiagnosticsSink for NdjsonSink<W> {
    fn emit(&mut self, record: &DiagnosticsRecord) -> io::Result<()> {
        serde_json::to_writer(&mut self.out, record)?;
        self.out.write_all(b"\n")
    }

    fn flush(&mut self) -> io::Result<()> {
        self.out.flush()
    }
}

/// CSV with a fixed column list of flattened field names; missing fields
/// are left empty.
pub struct CsvSink<W: Write> {
    out: W,
    columns: Vec<String>,
    wrote_header: bool,
}

impl<W: Write> CsvSink<W> {
    pub fn new(out: W, columns: Vec<String>) -> Self {
        Self { out, columns, wrote_header: false }
    }
}

impl<W: Write> DiagnosticsSink for CsvSink<W> {
    fn emit(&mut self, record: &DiagnosticsRecord) -> io::Result<()> {
        if !self.wrote_header {
            writeln!(self.out, "{}", self.columns.join(","))?;
            self.wrote_header = true;
        }
        let flat = flatten_record(record);
        let row: Vec<String> =
            self.columns.iter().map(|c| flat.get(c).map(|v| format!("{v:e}")).unwrap_or_default()).collect();
        writeln!(self.out, "{}", row.join(","))
    }

    fn flush(&mut self) -> io::Result<()> {
        self.out.flush()
    }
}

/// Numeric leaves of a record keyed by dotted path (`lp_u.4`,
/// `xr_constants.energy`). Null values (absent options, non-finite floats)
/// map to NaN.
pub fn flatten_record(record: &DiagnosticsRecord) -> BTreeMap<String, f64> {
    let mut out = BTreeMap::new();
    let value = serde_json::to_value(record).unwrap_or(Value::Null);
    flatten_value("", &value, &mut out);
    out
}

fn flatten_value(prefix: &str, value: &Value, out: &mut BTreeMap<String, f64>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten_value(&key, v, out);
            }
        }
        Value::Number(n) => {
            out.insert(prefix.to_string(), n.as_f64().unwrap_or(f64::NAN));
        }
        Value::Null if !prefix.is_empty() => {
            out.insert(prefix.to_string(), f64::NAN);
        }
        _ => {}
    }
}
