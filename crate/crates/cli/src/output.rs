//! CSV tables and JSON documents written by the subcommands.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::CliError;

/// One CSV cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
}

impl Cell {
    fn render(&self, out: &mut String) {
        match self {
            Cell::Int(i) => write!(out, "{i}").unwrap(),
            // 17 significant digits: exact round trip through text
            Cell::Float(x) if x.is_finite() => write!(out, "{x:.16e}").unwrap(),
            Cell::Float(x) => write!(out, "{x}").unwrap(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<u64> for Cell {
    fn from(i: u64) -> Self {
        Cell::Int(i as i64)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            for (i, c) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                c.render(&mut out);
            }
            out.push('\n');
        }
        out
    }
}

/// Provenance header shared by every JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document<T> {
    pub library_version: String,
    pub command: String,
    /// Data files written alongside, by file name.
    pub files: Vec<String>,
    pub content: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Where and how a run writes its results.
#[derive(Debug, Clone)]
pub struct Sink {
    pub dir: PathBuf,
    pub stem: String,
    pub format: Format,
}

impl Sink {
    fn path(&self, suffix: &str, ext: &str) -> PathBuf {
        self.dir.join(format!("{}{suffix}.{ext}", self.stem))
    }

    fn write(path: &Path, text: &str) -> Result<(), CliError> {
        fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
        println!("wrote {}", path.display());
        Ok(())
    }

    fn ensure_dir(&self) -> Result<(), CliError> {
        fs::create_dir_all(&self.dir)
            .map_err(|e| CliError::Io(format!("cannot create {}: {e}", self.dir.display())))
    }

    fn json<T: Serialize>(&self, command: &str, files: Vec<String>, content: &T) -> Result<(), CliError> {
        let doc = Document {
            library_version: quatginibre::VERSION.to_string(),
            command: command.to_string(),
            files,
            content,
        };
        let mut text = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Internal(e.to_string()))?;
        text.push('\n');
        Self::write(&self.path("", "json"), &text)
    }

    /// CSV format: every table plus a JSON sidecar holding `sidecar`.
    /// JSON format: one document holding `full`.
    pub fn emit<S: Serialize, F: Serialize>(
        &self,
        command: &str,
        tables: &[(&str, &Table)],
        sidecar: &S,
        full: &F,
    ) -> Result<(), CliError> {
        self.ensure_dir()?;
        match self.format {
            Format::Csv => {
                let mut files = Vec::new();
                for (suffix, table) in tables {
                    let path = self.path(suffix, "csv");
                    Self::write(&path, &table.render())?;
                    files.push(path.file_name().unwrap().to_string_lossy().into_owned());
                }
                self.json(command, files, sidecar)
            }
            Format::Json => self.json(command, Vec::new(), full),
        }
    }

    /// A JSON-only result, regardless of the format flag.
    pub fn emit_json<T: Serialize>(&self, command: &str, content: &T) -> Result<(), CliError> {
        self.ensure_dir()?;
        self.json(command, Vec::new(), content)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_seventeen_digits() {
        let mut t = Table::new(&["x", "i"]);
        t.push(vec![Cell::from(0.1), Cell::from(3usize)]);
        t.push(vec![Cell::from(f64::INFINITY), Cell::from(0u64)]);
        let text = t.render();
        assert_eq!(text, "x,i\n1.0000000000000001e-1,3\ninf,0\n");
        let back: f64 = text.lines().nth(1).unwrap().split(',').next().unwrap().parse().unwrap();
        assert_eq!(back, 0.1);
    }
}
