//! Result files: CSV with a header row, JSON, and a provenance header per run.
//!
//! Every file is written to a temporary sibling and renamed into place.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;
use tempfile::NamedTempFile;

use crate::error::CliError;

pub const DEFAULT_PRECISION: usize = 17;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Field {
    Int(u64),
    Num(f64),
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Num(v)
    }
}

impl From<usize> for Field {
    fn from(v: usize) -> Self {
        Field::Int(v as u64)
    }
}

/// `precision` significant digits in scientific notation.
pub fn format_number(v: f64, precision: usize) -> String {
    if v.is_finite() {
        format!("{:.*e}", precision.max(1) - 1, v)
    } else {
        format!("{v}")
    }
}

#[derive(Debug, Clone)]
pub struct OutputDir {
    root: PathBuf,
    precision: usize,
    written: Vec<PathBuf>,
}

impl OutputDir {
    pub fn create(root: &Path, precision: usize) -> Result<Self, CliError> {
        fs::create_dir_all(root).map_err(|source| CliError::Io {
            path: root.to_path_buf(),
            source,
        })?;
        Ok(Self {
            root: root.to_path_buf(),
            precision,
            written: Vec::new(),
        })
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    pub fn write_csv<I>(&mut self, name: &str, header: &[&str], rows: I) -> Result<PathBuf, CliError>
    where
        I: IntoIterator<Item = Vec<Field>>,
    {
        let mut text = header.join(",");
        text.push('\n');
        for row in rows {
            let cells: Vec<String> = row
                .into_iter()
                .map(|f| match f {
                    Field::Int(i) => i.to_string(),
                    Field::Num(v) => format_number(v, self.precision),
                })
                .collect();
            text.push_str(&cells.join(","));
            text.push('\n');
        }
        self.write_atomic(name, text.as_bytes())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf, CliError> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write_atomic(name, text.as_bytes())
    }

    fn write_atomic(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf, CliError> {
        let path = self.root.join(name);
        let io = |source| CliError::Io {
            path: path.clone(),
            source,
        };
        let mut tmp = NamedTempFile::new_in(&self.root).map_err(io)?;
        tmp.write_all(bytes).map_err(io)?;
        tmp.as_file().sync_all().map_err(io)?;
        tmp.persist(&path).map_err(|e| io(e.error))?;
        self.written.push(path.clone());
        Ok(path)
    }
}

/// Header written next to every result: tool version, resolved parameters and
/// seed. The creation time lives only here so result files stay byte-stable.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub parameters: Value,
    pub seed: Option<u64>,
    pub created_unix: u64,
}

impl Provenance {
    pub fn new(command: &str, parameters: Value, seed: Option<u64>) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            parameters,
            seed,
            created_unix: creation_time(),
        }
    }
}

/// `SOURCE_DATE_EPOCH` when set, else the wall clock.
fn creation_time() -> u64 {
    std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or_else(|| {
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0)
        })
}
