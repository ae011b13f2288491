// SPDX-License-Identifier: Apache-2.0

//! CSV and JSON writers. Data files carry no timing so identical
//! configurations give byte-identical files.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::CliError;

/// Twelve significant digits.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.11e}")
    }
}

/// Empty when the quantity does not exist at this point.
pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn flag(b: bool) -> String {
    b.to_string()
}

pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let io = |e: csv::Error| CliError::io(path, e);
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_path(path)
            .map_err(io)?;
        w.write_record(&self.header).map_err(io)?;
        for row in &self.rows {
            w.write_record(row).map_err(io)?;
        }
        w.flush().map_err(|e| CliError::io(path, e))
    }
}

pub fn write_json<S: Serialize>(path: &Path, value: &S) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::io(path, e))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Output file names of one run.
pub struct Outputs {
    dir: PathBuf,
    stem: String,
    pub written: Vec<PathBuf>,
}

impl Outputs {
    pub fn new(dir: &Path, stem: &str) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            stem: stem.to_string(),
            written: Vec::new(),
        })
    }

    pub fn table(&mut self, table: &Table) -> Result<(), CliError> {
        let path = self.dir.join(format!("{}.csv", self.stem));
        table.write(&path)?;
        self.written.push(path);
        Ok(())
    }

    pub fn data<S: Serialize>(&mut self, value: &S) -> Result<(), CliError> {
        let path = self.dir.join(format!("{}.json", self.stem));
        write_json(&path, value)?;
        self.written.push(path);
        Ok(())
    }

    pub fn summary<S: Serialize>(&mut self, value: &S) -> Result<(), CliError> {
        let path = self.dir.join(format!("{}.summary.json", self.stem));
        write_json(&path, value)?;
        self.written.push(path);
        Ok(())
    }
}
