//! Batch scans of trivial-zero orders over a range of `j`, aggregated into
//! the non-classical set with its digit-sum statistics.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::digits::digit_sum;
use crate::error::{Error, Result};
use crate::export::write_atomic;
use crate::poly::Poly;
use crate::ring::TextFormat;
use crate::special::{RingInfo, ZetaRing};
use crate::vadic::vadic_order_with_special;
use crate::zeros::{trivial_zero_report, TrivialZeroReport};

pub const DEFAULT_JMAX_FQT: u64 = 1024;
pub const DEFAULT_JMAX_CURVE: u64 = 256;
pub const DEFAULT_JMAX_VADIC: u64 = 128;

/// The place at which trivial zeros are examined.
#[derive(Clone, Debug, PartialEq)]
pub enum ScanPlace {
    Infty,
    /// A degree-one place of `F_r[T]`.
    Finite(Poly),
}

impl ScanPlace {
    /// Parses `infty` or `v=POLY` against the ring.
    pub fn parse(ring: &ZetaRing, s: &str) -> Result<ScanPlace> {
        let s = s.trim();
        if s == "infty" || s == "inf" {
            return Ok(ScanPlace::Infty);
        }
        let Some(v) = s.strip_prefix("v=") else {
            return Err(Error::InvalidInput(format!("unknown place {s:?}; use infty or v=POLY")));
        };
        match ring {
            ZetaRing::Fqt(pr) => Ok(ScanPlace::Finite(pr.parse(v)?)),
            ZetaRing::Curve(_) => Err(Error::InvalidInput(
                "finite places are only supported over F_r[T]".into(),
            )),
        }
    }

    pub fn label(&self, ring: &ZetaRing) -> String {
        match (self, ring) {
            (ScanPlace::Infty, _) => "infty".into(),
            (ScanPlace::Finite(v), ZetaRing::Fqt(pr)) => format!("v={}", pr.render(v)),
            (ScanPlace::Finite(v), ZetaRing::Curve(_)) => format!("v={v:?}"),
        }
    }

    pub fn default_jmax(&self, ring: &ZetaRing) -> u64 {
        match (self, ring) {
            (ScanPlace::Finite(_), _) => DEFAULT_JMAX_VADIC,
            (ScanPlace::Infty, ZetaRing::Fqt(_)) => DEFAULT_JMAX_FQT,
            (ScanPlace::Infty, ZetaRing::Curve(_)) => DEFAULT_JMAX_CURVE,
        }
    }
}

/// Growth of the largest digit sum over the non-classical set between the
/// lower half `[1, j_max/2]` and the upper half of the scanned range.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Anomaly {
    pub max_lp_lower_half: Option<u64>,
    pub max_lp_upper_half: Option<u64>,
    pub flagged: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub ring: RingInfo,
    pub place: String,
    pub j_max: u64,
    pub d_max_policy: String,
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timestamp: Option<String>,
    pub entries: Vec<TrivialZeroReport>,
    pub nonclassical_set: Vec<u64>,
    pub max_lp_nonclassical: Option<u64>,
    pub closure_violations: Vec<(u64, u64)>,
    pub anomaly: Anomaly,
}

#[derive(Clone, Debug, Default)]
pub struct ScanOptions {
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
    /// Checkpoint file, read on start if present and rewritten as work completes.
    pub checkpoint: Option<PathBuf>,
    /// Exponents per checkpoint batch (0 picks a default).
    pub batch: usize,
    /// Stop after this many newly computed exponents, leaving the checkpoint
    /// behind and returning [`Error::Checkpoint`].
    pub stop_after: Option<usize>,
    /// Recorded in the report if set; omitted by default to keep reports
    /// byte-identical across runs.
    pub timestamp: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct Checkpoint {
    ring: String,
    place: String,
    entries: Vec<TrivialZeroReport>,
}

impl Checkpoint {
    fn load(path: &Path, ring: &str, place: &str) -> Result<Option<Checkpoint>> {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(Error::io(path, e)),
        };
        let cp: Checkpoint = serde_json::from_str(&text)
            .map_err(|e| Error::Checkpoint(format!("{}: {e}", path.display())))?;
        if cp.ring != ring || cp.place != place {
            return Err(Error::Checkpoint(format!(
                "{} belongs to a scan of {} at {}, not {ring} at {place}",
                path.display(),
                cp.ring,
                cp.place
            )));
        }
        Ok(Some(cp))
    }

    fn save(&self, path: &Path) -> Result<()> {
        write_atomic(path, serde_json::to_string(self)?.as_bytes())
    }
}

/// Exponents carrying a trivial zero at the place: multiples of `r - 1` at
/// infinity, every positive `j` at a finite place.
pub fn trivial_zero_exponents(ring: &ZetaRing, place: &ScanPlace, j_max: u64) -> Vec<u64> {
    let step = match place {
        ScanPlace::Infty => ring.r() - 1,
        ScanPlace::Finite(_) => 1,
    };
    (1..=j_max).filter(|j| j % step == 0).collect()
}

fn entry_for(ring: &ZetaRing, place: &ScanPlace, j: u64) -> Result<TrivialZeroReport> {
    match (place, ring) {
        (ScanPlace::Infty, _) => trivial_zero_report(ring, j),
        (ScanPlace::Finite(v), ZetaRing::Fqt(pr)) => {
            let (order, vs) = vadic_order_with_special(pr, v, j)?;
            let np = vs.newton_polygon();
            Ok(TrivialZeroReport {
                ring: ring.id(),
                j,
                v0: order.v0,
                v1: order.v1,
                nonclassical: order.nonclassical,
                l_p: order.l_p,
                l_r: order.l_r,
                np_slopes: np.slopes_string(),
                np_zero_slope_length: np.zero_slope_length(),
            })
        }
        (ScanPlace::Finite(_), ZetaRing::Curve(_)) => Err(Error::InvalidInput(
            "finite places are only supported over F_r[T]".into(),
        )),
    }
}

/// Scans every trivial-zero exponent `j <= j_max`.
pub fn scan_nonclassical_set(
    ring: &ZetaRing,
    place: &ScanPlace,
    j_max: u64,
    opts: &ScanOptions,
) -> Result<ScanReport> {
    if j_max == 0 {
        return Err(Error::InvalidInput("j_max must be at least 1".into()));
    }
    if let ScanPlace::Finite(v) = place {
        if v.degree() != Some(1) {
            return Err(Error::UnsupportedPlaceDegree(v.degree().unwrap_or(0)));
        }
    }
    let ring_id = ring.id();
    let place_label = place.label(ring);
    let mut done: BTreeMap<u64, TrivialZeroReport> = BTreeMap::new();
    if let Some(path) = &opts.checkpoint {
        if let Some(cp) = Checkpoint::load(path, &ring_id, &place_label)? {
            done.extend(cp.entries.into_iter().map(|e| (e.j, e)));
        }
    }
    let todo: Vec<u64> = trivial_zero_exponents(ring, place, j_max)
        .into_iter()
        .filter(|j| !done.contains_key(j))
        .collect();

    let pool = match opts.workers {
        Some(n) => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::InvalidInput(format!("cannot start {n} workers: {e}")))?,
        ),
        None => None,
    };
    let batch = if opts.batch == 0 { 64 } else { opts.batch };
    let mut computed = 0usize;
    for chunk in todo.chunks(batch) {
        let chunk = match opts.stop_after {
            Some(limit) if computed + chunk.len() > limit => &chunk[..limit - computed],
            _ => chunk,
        };
        let work = || {
            chunk
                .par_iter()
                .map(|&j| entry_for(ring, place, j))
                .collect::<Vec<Result<TrivialZeroReport>>>()
        };
        let results = match &pool {
            Some(p) => p.install(work),
            None => work(),
        };
        // Results arrive in j order, so the first error is the smallest failing j.
        for res in results {
            let e = res?;
            done.insert(e.j, e);
        }
        computed += chunk.len();
        if let Some(path) = &opts.checkpoint {
            Checkpoint {
                ring: ring_id.clone(),
                place: place_label.clone(),
                entries: done.values().cloned().collect(),
            }
            .save(path)?;
        }
        if opts.stop_after.is_some_and(|limit| computed >= limit) && computed < todo.len() {
            return Err(Error::Checkpoint(format!(
                "stopped after {computed} of {} exponents",
                todo.len()
            )));
        }
    }

    let entries: Vec<TrivialZeroReport> = done.into_values().filter(|e| e.j <= j_max).collect();
    Ok(assemble(ring, place, j_max, entries, opts.timestamp.clone()))
}

fn assemble(
    ring: &ZetaRing,
    place: &ScanPlace,
    j_max: u64,
    entries: Vec<TrivialZeroReport>,
    timestamp: Option<String>,
) -> ScanReport {
    let p = ring.p();
    let scanned: BTreeSet<u64> = entries.iter().map(|e| e.j).collect();
    let nonclassical_set: Vec<u64> = entries.iter().filter(|e| e.nonclassical).map(|e| e.j).collect();
    let nc: BTreeSet<u64> = nonclassical_set.iter().copied().collect();
    let closure_violations = nonclassical_set
        .iter()
        .filter_map(|&j| {
            let pj = j.checked_mul(p)?;
            (scanned.contains(&pj) && !nc.contains(&pj)).then_some((j, pj))
        })
        .collect();
    let lp = |j: u64| digit_sum(j, p);
    let max_lp_nonclassical = nonclassical_set.iter().map(|&j| lp(j)).max();
    let half = j_max / 2;
    let max_lp_lower_half = nonclassical_set.iter().filter(|&&j| j <= half).map(|&j| lp(j)).max();
    let max_lp_upper_half = nonclassical_set.iter().filter(|&&j| j > half).map(|&j| lp(j)).max();
    let flagged = match (max_lp_lower_half, max_lp_upper_half) {
        (Some(lo), Some(hi)) => hi > lo,
        (None, Some(_)) => half > 0,
        _ => false,
    };
    let d_max_policy = match place {
        ScanPlace::Infty if ring.genus() > 0 => format!(
            "d_max = ceil(l_r(j)/(r-1)) + {} + 3, top {} coefficients certified zero",
            2 * ring.genus(),
            ring.genus() + 2
        ),
        ScanPlace::Infty => "d_max = ceil(l_r(j)/(r-1)) + 3, top 2 coefficients certified zero".into(),
        ScanPlace::Finite(_) => "d_max = ceil(l_r(j)/(r-1)) + 3, top 2 coefficients certified zero".into(),
    };
    ScanReport {
        ring: ring.info(),
        place: place.label(ring),
        j_max,
        d_max_policy,
        version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp,
        entries,
        nonclassical_set,
        max_lp_nonclassical,
        closure_violations,
        anomaly: Anomaly {
            max_lp_lower_half,
            max_lp_upper_half,
            flagged,
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureAnalysis {
    /// Largest `l_p` over the non-classical set.
    pub bounded_evidence: Option<u64>,
    pub histogram_nonclassical: BTreeMap<u64, usize>,
    pub histogram_scanned: BTreeMap<u64, usize>,
    pub closure_ok: bool,
}

pub fn digit_closure_analysis(report: &ScanReport) -> ClosureAnalysis {
    let p = report.ring.p;
    let mut histogram_nonclassical = BTreeMap::new();
    let mut histogram_scanned = BTreeMap::new();
    for e in &report.entries {
        let l = digit_sum(e.j, p);
        *histogram_scanned.entry(l).or_insert(0) += 1;
        if e.nonclassical {
            *histogram_nonclassical.entry(l).or_insert(0) += 1;
        }
    }
    ClosureAnalysis {
        bounded_evidence: report.max_lp_nonclassical,
        histogram_nonclassical,
        histogram_scanned,
        closure_ok: report.closure_violations.is_empty(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HayesRow {
    pub j: u64,
    pub l_p_j: u64,
    pub l_p_j1: u64,
    pub nonclassical_for_shifted: bool,
}

/// Rows `j = 0..j_max-1` for the shifted series `L(s) = zeta(s - 1)`,
/// whose value at `-j` is the zeta value at `-(j+1)`.
pub fn hayes_shift_view(report: &ScanReport) -> Result<Vec<HayesRow>> {
    if report.ring.curve.is_none() || report.place != "infty" {
        return Err(Error::InvalidInput(
            "the shift view needs a curve-ring scan at infinity".into(),
        ));
    }
    let p = report.ring.p;
    let nc: BTreeSet<u64> = report.nonclassical_set.iter().copied().collect();
    Ok((0..report.j_max)
        .map(|j| HayesRow {
            j,
            l_p_j: digit_sum(j, p),
            l_p_j1: digit_sum(j + 1, p),
            nonclassical_for_shifted: nc.contains(&(j + 1)),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::export::{parse_csv_rows, report_from_json, report_to_csv, report_to_json, CsvRow};

    fn scan(id: &str, place: &str, j_max: u64) -> ScanReport {
        let ring = ZetaRing::parse(id).unwrap();
        let place = ScanPlace::parse(&ring, place).unwrap();
        scan_nonclassical_set(&ring, &place, j_max, &ScanOptions::default()).unwrap()
    }

    #[test]
    fn genus1_contains_powers_of_two() {
        let r = scan("genus1", "infty", 32);
        for j in [1, 2, 4, 8, 16, 32] {
            assert!(r.nonclassical_set.contains(&j), "{j}");
        }
        assert!(r.closure_violations.is_empty());
        assert_eq!(r.entries.len(), 32);
    }

    #[test]
    fn fqt_sets_are_empty() {
        assert!(scan("fqt:2", "infty", 64).nonclassical_set.is_empty());
        let r3 = scan("fqt:3", "infty", 100);
        assert!(r3.nonclassical_set.is_empty());
        assert!(r3.entries.iter().all(|e| e.j % 2 == 0));
        let a = digit_closure_analysis(&r3);
        assert_eq!(a.bounded_evidence, None);
        assert!(a.closure_ok);
    }

    #[test]
    fn genus2_seven_is_classical() {
        assert!(!scan("genus2", "infty", 8).nonclassical_set.contains(&7));
    }

    #[test]
    fn vadic_scan_and_place_errors() {
        let r = scan("fqt:2", "v=T", 32);
        assert_eq!(r.place, "v=T");
        assert_eq!(r.entries.len(), 32);
        assert!(r.closure_violations.is_empty());
        let ring = ZetaRing::parse("fqt:2").unwrap();
        let v2 = ScanPlace::parse(&ring, "v=T^2+T+1").unwrap();
        assert!(matches!(
            scan_nonclassical_set(&ring, &v2, 4, &ScanOptions::default()),
            Err(Error::UnsupportedPlaceDegree(2))
        ));
        let g1 = ZetaRing::parse("genus1").unwrap();
        assert!(ScanPlace::parse(&g1, "v=T").is_err());
        assert!(ScanPlace::parse(&ring, "w").is_err());
        assert!(scan_nonclassical_set(&ring, &ScanPlace::Infty, 0, &ScanOptions::default()).is_err());
    }

    #[test]
    fn analysis_and_shift_view() {
        let r = scan("genus1", "infty", 64);
        let a = digit_closure_analysis(&r);
        assert!(a.closure_ok);
        let max = a.bounded_evidence.unwrap();
        assert!(r.nonclassical_set.iter().all(|&j| digit_sum(j, 2) <= max));
        let view = hayes_shift_view(&r).unwrap();
        assert_eq!(view.len(), 64);
        assert!(view[1].nonclassical_for_shifted);
        for t in 1..6u32 {
            let row = &view[(1usize << t) - 1];
            assert_eq!((row.l_p_j, row.l_p_j1), (t as u64, 1));
        }
        for row in &view {
            assert_eq!(row.nonclassical_for_shifted, r.nonclassical_set.contains(&(row.j + 1)));
        }
        assert!(hayes_shift_view(&scan("fqt:2", "infty", 4)).is_err());
    }

    #[test]
    fn workers_and_resume_are_deterministic() {
        let ring = ZetaRing::parse("genus1").unwrap();
        let place = ScanPlace::Infty;
        let serial = scan_nonclassical_set(&ring, &place, 40, &ScanOptions { workers: Some(1), ..Default::default() }).unwrap();
        let parallel = scan_nonclassical_set(&ring, &place, 40, &ScanOptions { workers: Some(4), batch: 7, ..Default::default() }).unwrap();
        assert_eq!(report_to_json(&serial).unwrap(), report_to_json(&parallel).unwrap());

        let dir = tempfile::tempdir().unwrap();
        let cp = dir.path().join("cp.json");
        let interrupted = ScanOptions {
            checkpoint: Some(cp.clone()),
            batch: 5,
            stop_after: Some(12),
            ..Default::default()
        };
        assert!(matches!(scan_nonclassical_set(&ring, &place, 40, &interrupted), Err(Error::Checkpoint(_))));
        assert!(cp.exists());
        let resumed = ScanOptions {
            checkpoint: Some(cp.clone()),
            ..Default::default()
        };
        let r = scan_nonclassical_set(&ring, &place, 40, &resumed).unwrap();
        assert_eq!(report_to_csv(&r), report_to_csv(&serial));
        assert_eq!(report_to_json(&r).unwrap(), report_to_json(&serial).unwrap());

        let other = ZetaRing::parse("genus2").unwrap();
        assert!(matches!(scan_nonclassical_set(&other, &place, 4, &resumed), Err(Error::Checkpoint(_))));
        std::fs::write(&cp, "{not json").unwrap();
        assert!(matches!(scan_nonclassical_set(&ring, &place, 4, &resumed), Err(Error::Checkpoint(_))));
    }

    #[test]
    fn exports_round_trip() {
        let r = scan("genus1", "infty", 16);
        let csv = report_to_csv(&r);
        let rows = parse_csv_rows(&csv).unwrap();
        assert_eq!(rows.iter().map(|row| row.j).collect::<Vec<_>>(), (1..=16).collect::<Vec<_>>());
        assert_eq!(rows, r.entries.iter().map(CsvRow::from).collect::<Vec<_>>());
        assert_eq!(report_from_json(&report_to_json(&r).unwrap()).unwrap(), r);

        let mut empty = r.clone();
        empty.entries.clear();
        let csv = report_to_csv(&empty);
        assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>(), vec![TrivialZeroReport::CSV_HEADER]);
        assert!(parse_csv_rows(&csv).unwrap().is_empty());
    }

    #[test]
    fn anomaly_flag() {
        let r = scan("genus1", "infty", 64);
        let a = &r.anomaly;
        assert_eq!(a.flagged, a.max_lp_upper_half > a.max_lp_lower_half && a.max_lp_lower_half.is_some());
    }
}
