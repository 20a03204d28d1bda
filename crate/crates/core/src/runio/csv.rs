//! Lossless CSV emission and single-column series ingestion.
//!
//! Floats are rendered with Rust's shortest round-trip formatting, so a
//! written value parses back bit-identical. Lines end with `\n`.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CsvError {
    #[error("csv I/O: {0}")]
    Io(#[from] io::Error),
    #[error("{path}:{line}: cannot parse '{field}' as a number")]
    BadNumber {
        path: String,
        line: usize,
        field: String,
    },
    #[error("{path}: no data rows")]
    Empty { path: String },
}

/// Shortest decimal string that parses back to exactly `v`.
pub fn fmt_float(v: f64) -> String {
    format!("{v}")
}

/// Assemble a CSV document: header line, then one line per row.
pub fn csv_string<I, S>(header: &str, rows: I) -> String
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut out = String::new();
    let _ = writeln!(out, "{header}");
    for row in rows {
        let _ = writeln!(out, "{}", row.as_ref());
    }
    out
}

pub fn write_csv<I, S>(path: &Path, header: &str, rows: I) -> Result<(), CsvError>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    fs::write(path, csv_string(header, rows))?;
    Ok(())
}

/// Read a single-column CSV of scalars. A non-numeric first line is
/// treated as a header and skipped; in multi-column files the first
/// field wins.
pub fn read_series_column(path: &Path) -> Result<Vec<f64>, CsvError> {
    let text = fs::read_to_string(path)?;
    let display = path.display().to_string();
    let mut values = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let field = line.split(',').next().unwrap_or(line).trim();
        match field.parse::<f64>() {
            Ok(v) => values.push(v),
            Err(_) if idx == 0 => continue, // header row
            Err(_) => {
                return Err(CsvError::BadNumber {
                    path: display,
                    line: idx + 1,
                    field: field.to_string(),
                })
            }
        }
    }
    if values.is_empty() {
        return Err(CsvError::Empty { path: display });
    }
    Ok(values)
}
