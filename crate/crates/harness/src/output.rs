//! CSV tables and the per-run output directory (`config.echo`, `MANIFEST`).

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::config::{emit, RunConfig};
use crate::error::HarnessResult;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(usize),
    Real(f64),
    Empty,
}

impl Cell {
    pub fn real(&self) -> Option<f64> {
        match *self {
            Cell::Real(v) => Some(v),
            Cell::Int(n) => Some(n as f64),
            Cell::Empty => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Real)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // 17 significant digits
            Cell::Real(v) => write!(f, "{v:.16e}"),
            Cell::Int(n) => write!(f, "{n}"),
            Cell::Empty => Ok(()),
        }
    }
}

/// A named-column table. Every row has exactly `header.len()` cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width does not match header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// All values in column `name`, `None` for empty cells.
    pub fn values(&self, name: &str) -> Vec<Option<f64>> {
        match self.column(name) {
            Some(c) => self.rows.iter().map(|r| r[c].real()).collect(),
            None => Vec::new(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            let line: Vec<String> = r.iter().map(|c| c.to_string()).collect();
            s.push_str(&line.join(","));
            s.push('\n');
        }
        s
    }
}

/// Output directory for one invocation. Tracks every file written so the
/// manifest can list them.
#[derive(Debug)]
pub struct OutputDir {
    root: PathBuf,
    files: Vec<String>,
}

impl OutputDir {
    pub fn create(root: &Path) -> HarnessResult<Self> {
        fs::create_dir_all(root)?;
        Ok(Self {
            root: root.to_path_buf(),
            files: Vec::new(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn write(&mut self, name: &str, contents: &str) -> HarnessResult<PathBuf> {
        let p = self.root.join(name);
        if let Some(parent) = p.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::File::create(&p)?.write_all(contents.as_bytes())?;
        self.record(name);
        Ok(p)
    }

    pub fn write_table(&mut self, name: &str, t: &Table) -> HarnessResult<PathBuf> {
        self.write(name, &t.to_csv())
    }

    pub fn echo_config(&mut self, cfg: &RunConfig) -> HarnessResult<PathBuf> {
        self.write("config.echo", &emit(cfg))
    }

    pub fn record(&mut self, name: &str) {
        if !self.files.iter().any(|f| f == name) {
            self.files.push(name.to_string());
        }
    }

    pub fn files(&self) -> &[String] {
        &self.files
    }

    /// Writes `MANIFEST`, one produced file per line.
    pub fn finish(mut self) -> HarnessResult<Vec<String>> {
        let mut body = self.files.join("\n");
        body.push('\n');
        fs::write(self.root.join("MANIFEST"), body)?;
        self.files.push("MANIFEST".into());
        Ok(self.files)
    }
}
