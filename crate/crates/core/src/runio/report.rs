//! Run reports: a JSON record carrying everything needed to replay a run.

use std::fs;
use std::io;
use std::path::Path;

use serde::Serialize;

/// Bumped when the report layout changes shape.
pub const FORMAT_VERSION: u32 = 1;

/// Envelope around a command's resolved configuration and results.
#[derive(Debug, Serialize)]
pub struct Report<C: Serialize, R: Serialize> {
    pub format_version: u32,
    pub artifact_version: String,
    pub command: String,
    pub seed: u64,
    pub config: C,
    pub results: R,
}

impl<C: Serialize, R: Serialize> Report<C, R> {
    pub fn new(command: impl Into<String>, seed: u64, config: C, results: R) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.into(),
            seed,
            config,
            results,
        }
    }
}

/// Pretty JSON with a trailing newline. Field order follows struct order,
/// so equal reports serialize to equal bytes.
pub fn render_report<C: Serialize, R: Serialize>(report: &Report<C, R>) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serialization cannot fail");
    s.push('\n');
    s
}

pub fn write_report<C: Serialize, R: Serialize>(
    path: &Path,
    report: &Report<C, R>,
) -> io::Result<()> {
    fs::write(path, render_report(report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::Serialize;

    #[derive(Serialize)]
    struct Cfg {
        n: usize,
        mu_h: f64,
    }

    #[test]
    fn report_echoes_config() {
        let report = Report::new("lattice run", 42, Cfg { n: 30, mu_h: 0.05 }, ());
        let text = render_report(&report);
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["format_version"], 1);
        assert_eq!(parsed["seed"], 42);
        assert_eq!(parsed["config"]["n"], 30);
        assert_eq!(parsed["config"]["mu_h"], 0.05);
        assert_eq!(parsed["command"], "lattice run");
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn equal_reports_equal_bytes() {
        let a = render_report(&Report::new("x", 7, Cfg { n: 3, mu_h: 1.0 }, ()));
        let b = render_report(&Report::new("x", 7, Cfg { n: 3, mu_h: 1.0 }, ()));
        assert_eq!(a, b);
    }
}
