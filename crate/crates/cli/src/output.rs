//! CSV helpers and the run summary.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

/// Fixed-width scientific notation so reruns are byte-identical.
pub fn real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.12e}")
    } else {
        x.to_string()
    }
}

pub fn opt_real(x: Option<f64>) -> String {
    x.map(real).unwrap_or_default()
}

pub struct Table {
    path: PathBuf,
    writer: csv::Writer<fs::File>,
}

impl Table {
    pub fn create(dir: &Path, name: &str, header: &[&str]) -> Result<Self> {
        let path = dir.join(name);
        let mut writer = csv::Writer::from_path(&path).with_context(|| format!("creating {}", path.display()))?;
        writer.write_record(header)?;
        Ok(Table { path, writer })
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields).with_context(|| format!("writing {}", self.path.display()))
    }

    pub fn finish(mut self) -> Result<()> {
        self.writer.flush().with_context(|| format!("writing {}", self.path.display()))
    }
}

pub fn write_text(dir: &Path, name: &str, text: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub command: &'static str,
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
}

#[derive(Debug, Default)]
pub struct Summary {
    pub checks: Vec<Check>,
}

impl Summary {
    pub fn check(&mut self, command: &'static str, name: impl Into<String>, value: f64, threshold: f64, passed: bool) {
        self.checks.push(Check { command, name: name.into(), value, threshold, passed });
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        let mut t = Table::create(dir, "summary.csv", &["command", "check", "value", "threshold", "passed"])?;
        for c in &self.checks {
            t.row([c.command.to_string(), c.name.clone(), real(c.value), real(c.threshold), c.passed.to_string()])?;
        }
        t.finish()
    }
}
