//! Artifact emission: CSV tables or report-embedded arrays, plus the
//! JSON report every run writes.

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::Serialize;

use chaoslab::runio::{write_csv, write_report, Report};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Where and how this invocation writes its artifacts.
pub struct Emit {
    pub out: PathBuf,
    pub seed: u64,
    pub format: OutputFormat,
}

impl Emit {
    pub fn ensure_dir(&self) -> Result<()> {
        std::fs::create_dir_all(&self.out)
            .with_context(|| format!("creating output directory {}", self.out.display()))
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    /// Write one data table as `<stem>.csv` when in CSV mode. In JSON
    /// mode the caller embeds the data in the report instead.
    pub fn table<I, S>(&self, stem: &str, header: &str, rows: I) -> Result<Option<PathBuf>>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        if self.format != OutputFormat::Csv {
            return Ok(None);
        }
        let path = self.path(&format!("{stem}.csv"));
        write_csv(&path, header, rows).with_context(|| format!("writing {}", path.display()))?;
        Ok(Some(path))
    }

    /// Write the run report: config echo plus results.
    pub fn report<C: Serialize, R: Serialize>(
        &self,
        command: &str,
        config: C,
        results: R,
    ) -> Result<PathBuf> {
        let path = self.path("report.json");
        let report = Report::new(command, self.seed, config, results);
        write_report(&path, &report).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }

    pub fn write_frame(&self, frame: &chaoslab::runio::Frame, stem: &str) -> Result<PathBuf> {
        let path = self.path(&format!("{stem}.{}", frame.extension()));
        frame
            .write(&path)
            .with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }
}

/// Frame stem like `lattice_t000120`, zero-padded so shells sort frames
/// in generation order.
pub fn frame_stem(prefix: &str, t: usize) -> String {
    format!("{prefix}_t{t:06}")
}

pub fn float(v: f64) -> String {
    chaoslab::runio::fmt_float(v)
}

/// CSV field for a possibly-undefined correlation.
pub fn opt_float(v: Option<f64>) -> String {
    match v {
        Some(v) => float(v),
        None => "nan".to_string(),
    }
}
