//! Report envelope and writers.
//!
//! Every command emits one machine-readable report: JSON wraps the rows
//! and summary in an envelope echoing the command and configuration; CSV
//! emits the fixed per-command column set with a header line. Outputs
//! are byte-identical across re-runs with the same configuration and
//! seed, so wall-clock timing goes to stderr, never into the report.

use std::fs;
use std::io::Write;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Serialize)]
pub struct Envelope<C: Serialize, R: Serialize, S: Serialize> {
    pub command: &'static str,
    pub version: &'static str,
    pub config: C,
    pub rows: Vec<R>,
    pub summary: S,
}

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// A row that knows its CSV shape.
pub trait CsvRow {
    fn headers() -> &'static [&'static str];
    fn fields(&self) -> Vec<String>;
}

/// f64 → string with shortest round-trip formatting; deterministic for
/// identical bits.
pub fn num(v: f64) -> String {
    format!("{v}")
}

pub fn render<C: Serialize, R: Serialize + CsvRow, S: Serialize>(
    envelope: &Envelope<C, R, S>,
    format: Format,
) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(envelope).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut out = String::new();
            out.push_str(&R::headers().join(","));
            out.push('\n');
            for row in &envelope.rows {
                out.push_str(&row.fields().join(","));
                out.push('\n');
            }
            out
        }
    }
}

/// Writes to the path if given, stdout otherwise.
pub fn emit(text: &str, output: Option<&std::path::Path>) -> std::io::Result<()> {
    match output {
        Some(path) => fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}
