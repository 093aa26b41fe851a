//! Tabular run results and their CSV / JSON encodings.

use serde::Serialize;
use serde_json::{json, Map, Value};

/// One cell of a result table.
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Int(i64),
    UInt(u64),
    Real(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl From<u32> for Field {
    fn from(v: u32) -> Self {
        Field::UInt(v.into())
    }
}

impl From<u64> for Field {
    fn from(v: u64) -> Self {
        Field::UInt(v)
    }
}

impl From<usize> for Field {
    fn from(v: usize) -> Self {
        Field::UInt(v as u64)
    }
}

impl From<i64> for Field {
    fn from(v: i64) -> Self {
        Field::Int(v)
    }
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Real(v)
    }
}

impl From<bool> for Field {
    fn from(v: bool) -> Self {
        Field::Bool(v)
    }
}

impl From<String> for Field {
    fn from(v: String) -> Self {
        Field::Text(v)
    }
}

impl From<&str> for Field {
    fn from(v: &str) -> Self {
        Field::Text(v.to_string())
    }
}

impl<T: Into<Field>> From<Option<T>> for Field {
    fn from(v: Option<T>) -> Self {
        v.map_or(Field::Empty, Into::into)
    }
}

/// Rounds to 15 significant digits and prints the shortest string that reads back as the
/// rounded value, so `0.5` stays `0.5` and noise past the 15th digit never reaches a diff.
pub fn format_real(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.14e}").parse().expect("formatted float parses");
    if rounded == 0.0 {
        return "0".to_string();
    }
    let magnitude = rounded.abs();
    if !(1e-6..1e21).contains(&magnitude) {
        format!("{rounded:e}")
    } else {
        format!("{rounded}")
    }
}

fn round_real(x: f64) -> f64 {
    format_real(x).parse().unwrap_or(x)
}

impl Field {
    fn csv(&self) -> String {
        match self {
            Field::Int(v) => v.to_string(),
            Field::UInt(v) => v.to_string(),
            Field::Real(v) => format_real(*v),
            Field::Bool(v) => v.to_string(),
            Field::Empty => String::new(),
            Field::Text(s) if s.contains([',', '"', '\n', '\r']) => {
                format!("\"{}\"", s.replace('"', "\"\""))
            }
            Field::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Field::Int(v) => json!(v),
            Field::UInt(v) => json!(v),
            Field::Real(v) => {
                serde_json::Number::from_f64(round_real(*v)).map_or(Value::Null, Value::Number)
            }
            Field::Bool(v) => json!(v),
            Field::Text(s) => json!(s),
            Field::Empty => Value::Null,
        }
    }
}

/// Outcome of one cross-check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub identity: String,
    pub scope: String,
    pub passed: bool,
    pub detail: String,
}

/// Informational finding that is reported but does not decide the exit status.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostic {
    pub name: String,
    pub detail: Value,
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub command: String,
    pub version: String,
    /// Resolved configuration, echoed in JSON output.
    pub config: Value,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Field>>,
    pub verdicts: Vec<Verdict>,
    pub diagnostics: Vec<Diagnostic>,
}

impl Report {
    pub fn new(command: &str, columns: &[&str]) -> Self {
        Self {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            ..Self::default()
        }
    }

    pub fn push_row(&mut self, row: Vec<Field>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn all_passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }
}

/// Header row plus one line per record; comma separated, LF terminated.
pub fn emit_csv(report: &Report) -> Vec<u8> {
    let mut out = String::new();
    out.push_str(&report.columns.join(","));
    out.push('\n');
    for row in &report.rows {
        let cells: Vec<String> = row.iter().map(Field::csv).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out.into_bytes()
}

/// Records keyed by column name, plus verdicts, diagnostics and a config echo.
pub fn emit_json(report: &Report) -> Vec<u8> {
    let records: Vec<Value> = report
        .rows
        .iter()
        .map(|row| {
            let map: Map<String, Value> = report
                .columns
                .iter()
                .zip(row)
                .map(|(c, f)| (c.clone(), f.json()))
                .collect();
            Value::Object(map)
        })
        .collect();
    let doc = json!({
        "command": report.command,
        "version": report.version,
        "config": report.config,
        "columns": report.columns,
        "records": records,
        "verdicts": report.verdicts,
        "diagnostics": report.diagnostics,
    });
    let mut bytes = serde_json::to_vec_pretty(&doc).expect("report serializes");
    bytes.push(b'\n');
    bytes
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_formatting() {
        assert_eq!(format_real(0.5), "0.5");
        assert_eq!(format_real(0.125), "0.125");
        assert_eq!(format_real(1.0 + 5f64.sqrt()), "3.23606797749979");
        assert_eq!(format_real(0.1 + 0.2), "0.3");
        assert_eq!(format_real(2.0), "2");
        assert_eq!(format_real(-0.0), "0");
        assert_eq!(format_real(1e-20), "1e-20");
    }

    #[test]
    fn empty_report_is_header_only() {
        let r = Report::new("demography", &["age", "count", "proportion"]);
        assert_eq!(emit_csv(&r), b"age,count,proportion\n");
    }

    #[test]
    fn csv_quotes_text_with_commas() {
        let mut r = Report::new("x", &["a", "b"]);
        r.push_row(vec!["1,2".into(), Field::Empty]);
        assert_eq!(String::from_utf8(emit_csv(&r)).unwrap(), "a,b\n\"1,2\",\n");
    }

    #[test]
    fn json_mirrors_columns() {
        let mut r = Report::new("demography", &["age", "count", "proportion"]);
        r.push_row(vec![1u32.into(), 4u64.into(), 0.5.into()]);
        let v: Value = serde_json::from_slice(&emit_json(&r)).unwrap();
        assert_eq!(
            v["records"][0],
            json!({"age": 1, "count": 4, "proportion": 0.5})
        );
        let keys: Vec<&String> = v["records"][0].as_object().unwrap().keys().collect();
        assert_eq!(keys, vec!["age", "count", "proportion"]);
    }
}
