//! Run reports: JSON with a schema version, CSV sidecars, atomic writes.

use crate::config::{ExperimentConfig, SCHEMA_VERSION};
use serde::Serialize;
use std::io::Write;
use std::path::{Path, PathBuf};

/// One invariant evaluated during a run. Hard checks are mathematical facts; soft checks are
/// statistical or heuristic and never change the exit status.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub hard: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct InvariantSummary {
    pub passed: usize,
    pub failed: usize,
    pub hard_failed: usize,
    pub checks: Vec<Check>,
}

/// A named CSV table written next to the report as `<stem>.<name>.csv`.
#[derive(Debug, Clone)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Table { name: name.to_string(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    fn to_bytes(&self) -> csv::Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.into_inner().map_err(|e| e.into_error().into())
    }
}

/// What a pipeline hands back before it is wrapped into a report.
#[derive(Debug, Default)]
pub struct Outcome {
    pub results: serde_json::Value,
    pub checks: Vec<Check>,
    pub tables: Vec<Table>,
}

impl Outcome {
    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, hard: true, detail: detail.into() });
    }

    pub fn soft_check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, hard: false, detail: detail.into() });
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub config: ExperimentConfig,
    pub warnings: Vec<String>,
    pub results: serde_json::Value,
    pub invariants: InvariantSummary,
    /// Sidecar names; the files are `<stem>.<name>.csv` beside the report.
    pub sidecars: Vec<String>,
    /// Present only when timing was requested, so default reports stay byte-identical.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock_seconds: Option<f64>,
}

impl RunReport {
    pub fn new(config: ExperimentConfig, warnings: Vec<String>, outcome: &Outcome) -> Self {
        let passed = outcome.checks.iter().filter(|c| c.passed).count();
        let invariants = InvariantSummary {
            passed,
            failed: outcome.checks.len() - passed,
            hard_failed: outcome.checks.iter().filter(|c| c.hard && !c.passed).count(),
            checks: outcome.checks.clone(),
        };
        RunReport {
            schema_version: SCHEMA_VERSION,
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            config,
            warnings,
            results: outcome.results.clone(),
            invariants,
            sidecars: outcome.tables.iter().map(|t| t.name.clone()).collect(),
            wall_clock_seconds: None,
        }
    }
}

pub fn sidecar_path(report: &Path, name: &str) -> PathBuf {
    let stem = report.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "report".into());
    report.with_file_name(format!("{stem}.{name}.csv"))
}

/// Writes to a temporary file in the target directory, then renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| std::io::Error::new(std::io::ErrorKind::InvalidInput, "output path has no file name"))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let res = (|| {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    })();
    if res.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    res
}

/// Report JSON (pretty, trailing newline) followed by every sidecar.
pub fn write_report(path: &Path, report: &RunReport, tables: &[Table]) -> std::io::Result<()> {
    for t in tables {
        let bytes = t.to_bytes().map_err(std::io::Error::other)?;
        write_atomic(&sidecar_path(path, &t.name), &bytes)?;
    }
    write_atomic(path, &report_bytes(report)?)
}

pub fn report_bytes(report: &RunReport) -> std::io::Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(report)?;
    bytes.push(b'\n');
    Ok(bytes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sidecar_names_follow_the_report_stem() {
        assert_eq!(sidecar_path(Path::new("out/run.json"), "edges"), PathBuf::from("out/run.edges.csv"));
        assert_eq!(sidecar_path(Path::new("run"), "g"), PathBuf::from("run.g.csv"));
    }

    #[test]
    fn atomic_write_replaces_contents() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.json");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read(&p).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
