use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::config::{ExperimentConfig, OutputFormat};

pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("csv writer: {0}")]
    CsvFlush(String),
}

/// Rows for CSV and table output.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push<S: ToString>(&mut self, row: impl IntoIterator<Item = S>) {
        self.rows.push(row.into_iter().map(|s| s.to_string()).collect());
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub config: ExperimentConfig,
    pub results: Value,
    pub summary: Value,
    /// All internal checks passed.
    pub verified: bool,
    pub table: Table,
}

#[derive(Serialize)]
struct Envelope<'a> {
    version: &'a str,
    config: &'a ExperimentConfig,
    results: &'a Value,
    summary: &'a Value,
    verified: bool,
}

impl Report {
    /// JSON value with sorted keys, so parsing and re-serializing the
    /// emitted text is the identity.
    pub fn to_value(&self) -> Result<Value, ReportError> {
        let env = Envelope {
            version: TOOLKIT_VERSION,
            config: &self.config,
            results: &self.results,
            summary: &self.summary,
            verified: self.verified,
        };
        Ok(serde_json::to_value(env)?)
    }

    pub fn to_json(&self) -> Result<String, ReportError> {
        let mut s = serde_json::to_string_pretty(&self.to_value()?)?;
        s.push('\n');
        Ok(s)
    }

    pub fn to_csv(&self) -> Result<String, ReportError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.table.header)?;
        for row in &self.table.rows {
            w.write_record(row)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| ReportError::CsvFlush(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_text(&self) -> Result<String, ReportError> {
        let mut out = String::new();
        let cfg = serde_json::to_value(&self.config)?;
        let _ = writeln!(out, "bellframe {TOOLKIT_VERSION}");
        write_flat(&mut out, "config", &cfg);
        write_flat(&mut out, "summary", &self.summary);
        let _ = writeln!(out, "verified: {}", self.verified);
        if !self.table.rows.is_empty() {
            out.push('\n');
            let cols = self.table.header.len();
            let mut widths: Vec<usize> = self.table.header.iter().map(|h| h.len()).collect();
            for row in &self.table.rows {
                for (i, cell) in row.iter().enumerate().take(cols) {
                    widths[i] = widths[i].max(cell.len());
                }
            }
            let line = |cells: &[String]| {
                cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:<w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            let _ = writeln!(out, "{}", line(&self.table.header));
            for row in &self.table.rows {
                let _ = writeln!(out, "{}", line(row));
            }
        }
        Ok(out)
    }

    pub fn render(&self, format: OutputFormat) -> Result<String, ReportError> {
        match format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Table => self.to_text(),
        }
    }
}

fn write_flat(out: &mut String, prefix: &str, v: &Value) {
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                write_flat(out, &format!("{prefix}.{k}"), v);
            }
        }
        other => {
            let _ = writeln!(out, "{prefix}: {other}");
        }
    }
}
