use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::{CliError, Exit};

/// Rows for `--format csv`.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// Shortest round-trip form, in exponent notation for very small or large magnitudes.
pub fn num(v: f64) -> String {
    if v != 0.0 && v.is_finite() && !(1e-4..1e16).contains(&v.abs()) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

pub fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

pub fn list(v: &[f64]) -> String {
    v.iter().map(|x| num(*x)).collect::<Vec<_>>().join(";")
}

/// Result of one command before rendering.
#[derive(Debug)]
pub struct Outcome {
    pub exit: Exit,
    pub result: Value,
    pub table: Table,
    pub tolerances: Vec<(&'static str, f64)>,
    /// Extra `# key: value` lines for CSV output.
    pub notes: Vec<(&'static str, String)>,
}

impl Outcome {
    pub fn new<T: Serialize>(exit: Exit, result: &T, table: Table) -> Result<Self, CliError> {
        Ok(Outcome { exit, result: serde_json::to_value(result)?, table, tolerances: Vec::new(), notes: Vec::new() })
    }

    pub fn tol(mut self, name: &'static str, v: f64) -> Self {
        self.tolerances.push((name, v));
        self
    }

    pub fn note(mut self, name: &'static str, v: impl ToString) -> Self {
        self.notes.push((name, v.to_string()));
        self
    }
}

/// Run metadata shared by every report.
#[derive(Debug, Clone)]
pub struct Meta {
    pub command: &'static str,
    pub preset: Option<String>,
    pub input: Option<String>,
    pub seed: u64,
}

pub fn envelope(meta: &Meta, out: &Outcome) -> Value {
    let tolerances: Map<String, Value> = out.tolerances.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    json!({
        "tool": "bml",
        "version": env!("CARGO_PKG_VERSION"),
        "command": meta.command,
        "preset": meta.preset,
        "input": meta.input,
        "seed": meta.seed,
        "tolerances": tolerances,
        "status": out.exit.as_str(),
        "exit_code": out.exit as i32,
        "result": out.result,
    })
}

pub fn render_json(meta: &Meta, out: &Outcome) -> Result<Vec<u8>, CliError> {
    let mut bytes = serde_json::to_vec_pretty(&envelope(meta, out))?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// CSV preceded by `# key: value` metadata lines.
pub fn render_csv(meta: &Meta, out: &Outcome) -> Result<Vec<u8>, CliError> {
    let mut bytes = Vec::new();
    writeln!(bytes, "# tool: bml {}", env!("CARGO_PKG_VERSION"))?;
    writeln!(bytes, "# command: {}", meta.command)?;
    if let Some(p) = &meta.preset {
        writeln!(bytes, "# preset: {p}")?;
    }
    if let Some(p) = &meta.input {
        writeln!(bytes, "# input: {p}")?;
    }
    writeln!(bytes, "# seed: {}", meta.seed)?;
    for (k, v) in &out.tolerances {
        writeln!(bytes, "# tolerance {k}: {v:e}")?;
    }
    for (k, v) in &out.notes {
        writeln!(bytes, "# {k}: {v}")?;
    }
    writeln!(bytes, "# status: {}", out.exit.as_str())?;
    let mut w = csv::Writer::from_writer(&mut bytes);
    w.write_record(&out.table.header)?;
    for r in &out.table.rows {
        w.write_record(r)?;
    }
    w.flush()?;
    drop(w);
    Ok(bytes)
}

/// Writes through a sibling temporary file and a rename, so readers never see
/// a partial report.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(format!(".tmp{}", std::process::id()));
    let tmp = std::path::PathBuf::from(tmp);
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path).inspect_err(|_| {
        let _ = std::fs::remove_file(&tmp);
    })?;
    Ok(())
}
