//! Atomic file output and the CSV/JSON forms of scan reports.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scan::ScanReport;
use crate::zeros::TrivialZeroReport;

/// Writes via a temporary file in the target directory and renames it into
/// place, so readers never observe a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(tmp.path(), e))?;
    tmp.as_file().sync_all().map_err(|e| Error::io(tmp.path(), e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::InvalidInput(format!("unknown format {s:?}; use csv or json"))),
        }
    }
}

/// One data row of the CSV form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CsvRow {
    pub j: u64,
    pub l_p: u64,
    pub l_r: u64,
    pub v0: usize,
    pub v1: usize,
    pub nonclassical: bool,
    pub np_slopes: String,
}

impl From<&TrivialZeroReport> for CsvRow {
    fn from(r: &TrivialZeroReport) -> Self {
        CsvRow {
            j: r.j,
            l_p: r.l_p,
            l_r: r.l_r,
            v0: r.v0,
            v1: r.v1,
            nonclassical: r.nonclassical,
            np_slopes: r.np_slopes.clone(),
        }
    }
}

fn join_set(xs: &[u64]) -> String {
    xs.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

/// `#`-prefixed metadata lines, the column header, then one row per entry.
pub fn report_to_csv(report: &ScanReport) -> String {
    let mut out = String::new();
    let mut meta = |k: &str, v: String| out.push_str(&format!("# {k}: {v}\n"));
    meta("ring", report.ring.id.clone());
    if let Some(field) = &report.ring.field {
        meta(
            "field",
            format!(
                "p={} m={} modulus={:?} generator={:?}",
                field.p, field.m, field.modulus, field.generator
            ),
        );
    }
    if let Some(curve) = &report.ring.curve {
        meta("curve", format!("T1^2+T1+{} genus={}", curve.relation, curve.genus));
    }
    meta("place", report.place.clone());
    meta("j_max", report.j_max.to_string());
    meta("d_max_policy", report.d_max_policy.clone());
    meta("version", report.version.clone());
    if let Some(ts) = &report.timestamp {
        meta("timestamp", ts.clone());
    }
    meta("nonclassical_set", join_set(&report.nonclassical_set));
    meta(
        "max_lp_nonclassical",
        report.max_lp_nonclassical.map_or("none".into(), |m| m.to_string()),
    );
    meta(
        "closure_violations",
        report
            .closure_violations
            .iter()
            .map(|(a, b)| format!("{a}->{b}"))
            .collect::<Vec<_>>()
            .join(" "),
    );
    meta("conjecture_relevant_anomaly", report.anomaly.flagged.to_string());
    out.push_str(TrivialZeroReport::CSV_HEADER);
    out.push('\n');
    for e in &report.entries {
        out.push_str(&e.csv_row());
        out.push('\n');
    }
    out
}

/// Parses the data rows of [`report_to_csv`] output.
pub fn parse_csv_rows(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    match lines.next() {
        Some(h) if h == TrivialZeroReport::CSV_HEADER => {}
        other => return Err(Error::Parse(format!("unexpected CSV header {other:?}"))),
    }
    lines
        .filter(|l| !l.is_empty())
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 7 {
                return Err(Error::Parse(format!("expected 7 fields in {line:?}")));
            }
            let bad = |what: &str| Error::Parse(format!("bad {what} in {line:?}"));
            Ok(CsvRow {
                j: f[0].parse().map_err(|_| bad("j"))?,
                l_p: f[1].parse().map_err(|_| bad("l_p"))?,
                l_r: f[2].parse().map_err(|_| bad("l_r"))?,
                v0: f[3].parse().map_err(|_| bad("v0"))?,
                v1: f[4].parse().map_err(|_| bad("v1"))?,
                nonclassical: f[5].parse().map_err(|_| bad("nonclassical"))?,
                np_slopes: f[6].to_string(),
            })
        })
        .collect()
}

pub fn report_to_json(report: &ScanReport) -> Result<String> {
    let mut s = serde_json::to_string_pretty(report)?;
    s.push('\n');
    Ok(s)
}

pub fn report_from_json(text: &str) -> Result<ScanReport> {
    Ok(serde_json::from_str(text)?)
}

pub fn render_report(report: &ScanReport, format: Format) -> Result<String> {
    match format {
        Format::Csv => Ok(report_to_csv(report)),
        Format::Json => report_to_json(report),
    }
}

/// Renders and atomically writes a report.
pub fn export_report(report: &ScanReport, format: Format, path: &Path) -> Result<()> {
    write_atomic(path, render_report(report, format)?.as_bytes())
}
