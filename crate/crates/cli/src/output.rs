//! Rendering of artifacts: CSV via `csv`, JSON via `serde_json`, every float
//! rounded to 6 significant digits.

use std::path::Path;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// `x` rounded to 6 significant digits; `-0` becomes `0`.
pub fn round6(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if !x.is_finite() {
        return x;
    }
    format!("{x:.5e}").parse().expect("formatted float parses")
}

/// Shortest decimal form of [`round6`]; exponent notation below 1e-4.
pub fn sig6(x: f64) -> String {
    let r = round6(x);
    if r != 0.0 && r.is_finite() && r.abs() < 1e-4 {
        format!("{r:e}")
    } else {
        r.to_string()
    }
}

fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round6(n.as_f64().expect("f64 number"));
            serde_json::Number::from_f64(x)
                .map(Value::Number)
                .unwrap_or(Value::Null)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_value).collect()),
        Value::Object(o) => {
            Value::Object(o.into_iter().map(|(k, v)| (k, round_value(v))).collect())
        }
        other => other,
    }
}

/// Pretty JSON with rounded floats and a trailing newline.
pub fn to_json<S: Serialize>(value: &S) -> CliResult<String> {
    let v =
        serde_json::to_value(value).map_err(|e| CliError::Io(format!("serializing JSON: {e}")))?;
    let mut s = serde_json::to_string_pretty(&round_value(v)).expect("value serializes");
    s.push('\n');
    Ok(s)
}

/// CSV with the given header; cells are written as given.
pub fn to_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(format!("writing CSV: {e}"));
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Io(format!("writing CSV: {e}")))?;
    Ok(String::from_utf8(bytes).expect("CSV is UTF-8"))
}

/// Writes to `path`, or stdout when absent.
pub fn emit(body: &str, path: Option<&Path>) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, body)
            .map_err(|e| CliError::Io(format!("writing {}: {e}", p.display()))),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())
                .map_err(|e| CliError::Io(format!("writing stdout: {e}")))
        }
    }
}
