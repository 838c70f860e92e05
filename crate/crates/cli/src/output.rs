//! File emission: CSV or JSON tables, JSON summaries, run manifests.

use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

use crate::CliError;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    F(f64),
    U(u64),
    S(String),
}

impl Cell {
    /// 17 significant digits, locale-free.
    fn csv(&self) -> String {
        match self {
            Cell::F(x) => format!("{x:.16e}"),
            Cell::U(x) => x.to_string(),
            Cell::S(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::F(x) => json!(x),
            Cell::U(x) => json!(x),
            Cell::S(s) => json!(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::F(x)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::U(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::U(x as u64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::S(s.to_owned())
    }
}

/// Writes into one output directory and remembers what it wrote.
pub struct Sink {
    dir: PathBuf,
    format: Format,
    written: Vec<String>,
}

impl Sink {
    pub fn new(dir: &Path, format: Format) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            format,
            written: Vec::new(),
        })
    }

    fn path(&mut self, file: String) -> PathBuf {
        let p = self.dir.join(&file);
        self.written.push(file);
        p
    }

    /// `<name>.csv` or `<name>.table.json`, depending on the format.
    pub fn table<I>(&mut self, name: &str, header: &[&str], rows: I) -> Result<(), CliError>
    where
        I: IntoIterator<Item = Vec<Cell>>,
    {
        match self.format {
            Format::Csv => {
                let path = self.path(format!("{name}.csv"));
                let mut w = csv::Writer::from_path(&path).map_err(|e| CliError::csv(&path, e))?;
                w.write_record(header).map_err(|e| CliError::csv(&path, e))?;
                for row in rows {
                    w.write_record(row.iter().map(Cell::csv))
                        .map_err(|e| CliError::csv(&path, e))?;
                }
                w.flush().map_err(|e| CliError::io(&path, e))
            }
            Format::Json => {
                let rows: Vec<Value> = rows
                    .into_iter()
                    .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
                    .collect();
                let doc = json!({ "schema": SCHEMA, "columns": header, "rows": rows });
                let path = self.path(format!("{name}.table.json"));
                write_json(&path, &doc)
            }
        }
    }

    /// `<name>.summary.json` with a `schema` key added.
    pub fn summary<T: Serialize>(&mut self, name: &str, summary: &T) -> Result<(), CliError> {
        let mut value = serde_json::to_value(summary)?;
        if let Value::Object(map) = &mut value {
            map.insert("schema".into(), json!(SCHEMA));
        }
        let path = self.path(format!("{name}.summary.json"));
        write_json(&path, &value)
    }

    pub fn manifest(mut self, manifest: RunManifest) -> Result<(), CliError> {
        let path = self.dir.join(format!("{}.manifest.json", manifest.command));
        let manifest = RunManifest {
            outputs: std::mem::take(&mut self.written),
            ..manifest
        };
        write_json(&path, &manifest)
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Written next to every command's outputs. Equal manifests, without
/// timing, imply byte-identical outputs.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub schema: u32,
    pub command: String,
    pub version: &'static str,
    pub seed: u64,
    pub parameters: Value,
    /// File names relative to the output directory.
    pub outputs: Vec<String>,
    /// Present only with `--record-timing`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duration_secs: Option<f64>,
}

impl RunManifest {
    pub fn new(command: &str, seed: u64, parameters: Value) -> Self {
        Self {
            schema: SCHEMA,
            command: command.to_owned(),
            version: env!("CARGO_PKG_VERSION"),
            seed,
            parameters,
            outputs: Vec::new(),
            duration_secs: None,
        }
    }
}
