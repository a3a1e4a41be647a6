//! Artifact files and the run manifest.
//!
//! Every file is written once through a temporary file in the output
//! directory and renamed into place.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

pub const MANIFEST_SCHEMA: &str = "herglotz.manifest/1";
pub const ERROR_SCHEMA: &str = "herglotz.error/1";
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// A table cell. Numbers are written as `{:.17e}` in CSV so that reruns are
/// byte-identical and values round-trip.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Num(x) => format!("{x:.17e}"),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(i) => Value::from(*i),
            Cell::Num(x) => serde_json::Number::from_f64(*x).map(Value::Number).unwrap_or(Value::Null),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv))?;
        }
        w.into_inner().context("flushing csv buffer")
    }

    fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: serde_json::Map<String, Value> =
                    self.columns.iter().zip(row).map(|(c, v)| (c.to_string(), v.json())).collect();
                Value::Object(obj)
            })
            .collect();
        serde_json::json!({ "columns": self.columns, "rows": rows })
    }
}

/// A pass/fail comparison recorded in the manifest. Checks never change the exit status.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `value <= tolerance`.
    pub fn at_most(name: &str, value: f64, tolerance: f64) -> Self {
        Check { name: name.into(), value, tolerance, pass: value <= tolerance }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ArtifactRecord {
    pub file: String,
    pub schema: String,
    /// Library operations whose results fill the file.
    pub operations: Vec<String>,
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    schema: &'static str,
    command: &'a str,
    versions: BTreeMap<&'static str, &'static str>,
    config: &'a Value,
    tolerances: &'a BTreeMap<String, f64>,
    outputs: &'a [ArtifactRecord],
    checks: &'a [Check],
    flags: &'a [String],
    summary: &'a BTreeMap<String, Value>,
}

/// Collects artifacts of one command and writes them with the manifest.
#[derive(Debug)]
pub struct Run {
    pub dir: PathBuf,
    pub format: Format,
    pub command: String,
    pub config: Value,
    pub tolerances: BTreeMap<String, f64>,
    pub outputs: Vec<ArtifactRecord>,
    pub checks: Vec<Check>,
    /// Module-level failures (divergence, non-convergence); any flag makes the run fail.
    pub flags: Vec<String>,
    pub summary: BTreeMap<String, Value>,
}

impl Run {
    pub fn new(dir: &Path, format: Format, command: &str, config: Value) -> Result<Self> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating output directory {}", dir.display()))?;
        Ok(Run {
            dir: dir.to_path_buf(),
            format,
            command: command.into(),
            config,
            tolerances: BTreeMap::new(),
            outputs: Vec::new(),
            checks: Vec::new(),
            flags: Vec::new(),
            summary: BTreeMap::new(),
        })
    }

    pub fn tolerance(&mut self, name: &str, value: f64) {
        self.tolerances.insert(name.into(), value);
    }

    pub fn check(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn flag(&mut self, flag: impl Into<String>) {
        self.flags.push(flag.into());
    }

    pub fn summarize(&mut self, key: &str, value: impl Serialize) -> Result<()> {
        self.summary.insert(key.into(), serde_json::to_value(value)?);
        Ok(())
    }

    /// Writes a table as `<stem>.csv` or `<stem>.json` depending on the format.
    pub fn table(&mut self, stem: &str, schema: &str, operations: &[&str], table: &Table) -> Result<PathBuf> {
        let (file, bytes) = match self.format {
            Format::Csv => (format!("{stem}.csv"), table.to_csv()?),
            Format::Json => {
                let mut v = table.to_json();
                v["schema"] = Value::from(schema);
                (format!("{stem}.json"), pretty(&v)?)
            }
        };
        self.record(file, schema, operations, &bytes)
    }

    /// Writes a serializable report as `<stem>.json` regardless of the format.
    pub fn report<T: Serialize>(&mut self, stem: &str, schema: &str, operations: &[&str], report: &T) -> Result<PathBuf> {
        let mut v = serde_json::to_value(report)?;
        if let Value::Object(map) = &mut v {
            map.insert("schema".into(), Value::from(schema));
        }
        let bytes = pretty(&v)?;
        self.record(format!("{stem}.json"), schema, operations, &bytes)
    }

    fn record(&mut self, file: String, schema: &str, operations: &[&str], bytes: &[u8]) -> Result<PathBuf> {
        let path = self.dir.join(&file);
        write_atomic(&path, bytes)?;
        self.outputs.push(ArtifactRecord {
            file,
            schema: schema.into(),
            operations: operations.iter().map(|s| s.to_string()).collect(),
        });
        Ok(path)
    }

    /// Writes the manifest; returns its path.
    pub fn finish(&self) -> Result<PathBuf> {
        let mut versions = BTreeMap::new();
        versions.insert("herglotz-cli", env!("CARGO_PKG_VERSION"));
        versions.insert("herglotz-core", herglotz_core::VERSION);
        let manifest = Manifest {
            schema: MANIFEST_SCHEMA,
            command: &self.command,
            versions,
            config: &self.config,
            tolerances: &self.tolerances,
            outputs: &self.outputs,
            checks: &self.checks,
            flags: &self.flags,
            summary: &self.summary,
        };
        let path = self.dir.join(MANIFEST_FILE);
        write_atomic(&path, &pretty(&manifest)?)?;
        Ok(path)
    }
}

fn pretty<T: Serialize>(v: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(v)?;
    bytes.push(b'\n');
    Ok(bytes)
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating temporary file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}
