//! Table assembly and the CSV/JSON emitters shared by the subcommands.
//!
//! CSV files carry provenance as `#` comment lines (tool version, config
//! path, seed) so a result file can be traced back to its inputs. Numbers
//! are written as `{:.8e}` everywhere; reruns of the same config are
//! byte-identical.

use crate::error::{CliError, Result};
use clap::ValueEnum;
use std::fmt::Write as _;
use std::path::Path;

pub const TOOL: &str = concat!("collapse-survey ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Human,
    Csv,
    Json,
}

pub fn fmt(x: f64) -> String {
    format!("{x:.8e}")
}

#[derive(Debug, Clone)]
pub struct Table {
    comments: Vec<String>,
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            comments: vec![format!("tool: {TOOL}")],
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn comment(&mut self, line: impl Into<String>) {
        self.comments.push(line.into());
    }

    pub fn row(&mut self, cells: Vec<String>) {
        assert_eq!(cells.len(), self.columns.len(), "ragged table row");
        self.rows.push(cells);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for line in &self.comments {
            let _ = writeln!(out, "# {line}");
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }
}

/// Write `text` to `path`, creating parent directories as needed.
pub fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(path, text)?;
    Ok(())
}

/// Route a finished document to a file or stdout.
pub fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn to_json_pretty(value: &serde_json::Value) -> Result<String> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Config(format!("JSON serialization failed: {e}")))?;
    Ok(text + "\n")
}

/// Float for JSON output; maps non-finite values to null rather than failing.
pub fn json_num(x: f64) -> serde_json::Value {
    serde_json::Number::from_f64(x)
        .map(serde_json::Value::Number)
        .unwrap_or(serde_json::Value::Null)
}
