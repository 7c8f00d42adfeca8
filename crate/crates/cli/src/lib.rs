//! Command-line driver for `charp-zeros`.
//!
//! Every command takes flags, optionally layered over a JSON config file
//! (`--config`); flags win. Results go to stdout, or to `--out` via an
//! atomic rename. Relative `--out` paths resolve against `$CHARP_ZEROS_OUT_DIR`
//! when that variable is set.

use std::path::{Path, PathBuf};

use charp_zeros::character::DirichletCharacter;
use charp_zeros::export::{render_report, write_atomic, Format};
use charp_zeros::poly::PolyRing;
use charp_zeros::ring::TextFormat;
use charp_zeros::scan::{digit_closure_analysis, hayes_shift_view, scan_nonclassical_set, ScanOptions, ScanPlace};
use charp_zeros::special::{degree_profile, family_coefficient, special_polynomial, AnySpecial, PadicExponent, ZetaRing};
use charp_zeros::vadic::{vadic_continuity_check, vadic_special_polynomial, vadic_trivial_zero_order};
use charp_zeros::zeros::{
    newton_polygon_at_v, newton_polygon_infty, report_from_special, rh_simplicity_check, unit_root_multiplicities,
    TrivialZeroReport,
};
use charp_zeros::{Error, Result};
use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

pub const OUT_DIR_ENV: &str = "CHARP_ZEROS_OUT_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Special polynomial z(u, -j).
    Special,
    /// Trivial-zero order at infinity.
    Trivzero,
    /// Newton polygon and simplicity check.
    Newton,
    /// Interpolation at a finite place.
    Vadic,
    /// Scan of the non-classical set.
    Scan,
    /// Dirichlet character metadata.
    Char,
    /// Coefficient of the two-variable family at a p-adic exponent.
    Family,
    /// Degree of z(u, -j) across a range of j.
    Profile,
}

#[derive(Debug, Parser)]
#[command(name = "charp-zeros", version, about = "Special polynomials and trivial zeros of characteristic-p zeta and L-series")]
pub struct Cli {
    /// Command to run (may also come from --config).
    #[arg(value_enum)]
    pub command: Option<Command>,
    /// JSON file with any of the options below; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub opts: RunConfig,
}

/// Every run parameter. Used both as the flag set and as the config file
/// schema.
#[derive(Clone, Debug, Default, PartialEq, Eq, clap::Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[arg(skip)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    /// fqt:R (R in 2,3,4,5,8,9), genus1, genus2 or curve:POLY.
    #[arg(long)]
    pub ring: Option<String>,
    /// Field size for vadic and family.
    #[arg(long)]
    pub r: Option<u64>,
    #[arg(long)]
    pub j: Option<u64>,
    /// Truncation degree in u.
    #[arg(long)]
    pub dmax: Option<usize>,
    /// Character, e.g. r=2,f=T^2+T+1,k=1.
    #[arg(long = "char")]
    #[serde(rename = "char")]
    pub character: Option<String>,
    /// Finite place for vadic.
    #[arg(long)]
    pub v: Option<String>,
    /// vadic: also report the trivial-zero order (degree-1 places).
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub order: Option<bool>,
    /// vadic: continuity check against J2 at precision N.
    #[arg(long, num_args = 2, value_names = ["J2", "N"])]
    pub congr: Option<Vec<u64>>,
    /// infty or v=POLY.
    #[arg(long)]
    pub place: Option<String>,
    #[arg(long)]
    pub jmin: Option<u64>,
    #[arg(long)]
    pub jmax: Option<u64>,
    /// Scan checkpoint file (created if missing).
    #[arg(long)]
    pub resume: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// family: stratum degree.
    #[arg(long)]
    pub d: Option<usize>,
    /// family: base-p digits of y, least significant first, comma separated.
    #[arg(long)]
    pub y: Option<String>,
    /// family: precision in pi = 1/T.
    #[arg(long)]
    pub n: Option<usize>,
    /// Extension degree for unit-root detection with characters.
    #[arg(long = "ext")]
    pub ext: Option<u32>,
    /// scan: include the shift view and digit histogram in the summary.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub analysis: Option<bool>,
    /// scan: record this timestamp string in the report.
    #[arg(long)]
    pub timestamp: Option<String>,
}

macro_rules! merge_fields {
    ($hi:expr, $lo:expr, $($f:ident),*) => {
        RunConfig { $($f: $hi.$f.or($lo.$f),)* }
    };
}

impl RunConfig {
    /// Fields set in `self` win over `base`.
    pub fn over(self, base: RunConfig) -> RunConfig {
        merge_fields!(
            self, base, command, ring, r, j, dmax, character, v, order, congr, place, jmin, jmax, resume, out,
            format, workers, d, y, n, ext, analysis, timestamp
        )
    }

    fn require<T: Clone>(value: &Option<T>, flag: &str) -> Result<T> {
        value
            .clone()
            .ok_or_else(|| Error::InvalidInput(format!("missing --{flag}")))
    }

    fn format_or(&self, default: Format) -> Result<Format> {
        self.format.as_deref().map_or(Ok(default), str::parse)
    }
}

/// Builds the effective config from parsed flags and the optional file.
pub fn resolve(cli: Cli) -> Result<RunConfig> {
    let mut opts = cli.opts;
    opts.command = cli.command;
    let base = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidInput(format!("cannot read config {}: {e}", path.display())))?;
            serde_json::from_str::<RunConfig>(&text)
                .map_err(|e| Error::InvalidInput(format!("config {}: {e}", path.display())))?
        }
        None => RunConfig::default(),
    };
    Ok(opts.over(base))
}

/// Output of a command: the rendered text and where it went.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub written_to: Option<PathBuf>,
}

fn out_path(p: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if p.is_relative() => PathBuf::from(dir).join(p),
        _ => p.to_path_buf(),
    }
}

fn pretty(value: &impl Serialize) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

struct Parsed {
    ring: ZetaRing,
    chi: Option<DirichletCharacter>,
}

/// Ring and character, with the ring defaulting to `fqt:r` of the character.
fn ring_and_char(cfg: &RunConfig) -> Result<Parsed> {
    let chi = cfg
        .character
        .as_deref()
        .map(DirichletCharacter::from_designation)
        .transpose()?;
    let ring = match (&cfg.ring, &chi) {
        (Some(r), _) => ZetaRing::parse(r)?,
        (None, Some(chi)) => ZetaRing::fqt(chi.base_ring().q())?,
        (None, None) => return Err(Error::InvalidInput("missing --ring".into())),
    };
    if let (ZetaRing::Fqt(pr), Some(chi)) = (&ring, &chi) {
        if pr.q() != chi.base_ring().q() {
            return Err(Error::InvalidInput(format!(
                "--char is over F_{} but --ring is {}",
                chi.base_ring().q(),
                ring.id()
            )));
        }
    }
    if matches!(ring, ZetaRing::Curve(_)) && chi.is_some() {
        return Err(Error::InvalidInput("--char is only supported with --ring fqt:R".into()));
    }
    Ok(Parsed { ring, chi })
}

fn base_ring_from_r(cfg: &RunConfig) -> Result<PolyRing> {
    let r = match (cfg.r, &cfg.ring) {
        (Some(r), _) => r,
        (None, Some(id)) => match ZetaRing::parse(id)? {
            ZetaRing::Fqt(pr) => pr.q(),
            ZetaRing::Curve(_) => {
                return Err(Error::InvalidInput("this command needs --r R or --ring fqt:R".into()))
            }
        },
        (None, None) => RunConfig::require(&cfg.r, "r")?,
    };
    match ZetaRing::fqt(r)? {
        ZetaRing::Fqt(pr) => Ok(pr),
        ZetaRing::Curve(_) => unreachable!(),
    }
}

/// Runs a resolved config.
pub fn run_command(cfg: &RunConfig) -> Result<Outcome> {
    let command = RunConfig::require(&cfg.command, "command (positional)")?;
    let (text, path) = match command {
        Command::Special => (cmd_special(cfg)?, cfg.out.clone()),
        Command::Trivzero => (cmd_trivzero(cfg)?, cfg.out.clone()),
        Command::Newton => (cmd_newton(cfg)?, cfg.out.clone()),
        Command::Vadic => (cmd_vadic(cfg)?, cfg.out.clone()),
        Command::Scan => return cmd_scan(cfg),
        Command::Char => (cmd_char(cfg)?, cfg.out.clone()),
        Command::Family => (cmd_family(cfg)?, cfg.out.clone()),
        Command::Profile => (cmd_profile(cfg)?, cfg.out.clone()),
    };
    finish(text, path.as_deref())
}

fn finish(text: String, path: Option<&Path>) -> Result<Outcome> {
    match path {
        Some(p) => {
            let p = out_path(p);
            write_atomic(&p, text.as_bytes())?;
            Ok(Outcome {
                text,
                written_to: Some(p),
            })
        }
        None => Ok(Outcome { text, written_to: None }),
    }
}

fn compute_special(cfg: &RunConfig) -> Result<(Parsed, AnySpecial)> {
    let parsed = ring_and_char(cfg)?;
    let j = RunConfig::require(&cfg.j, "j")?;
    let z = special_polynomial(&parsed.ring, parsed.chi.as_ref(), j, cfg.dmax)?;
    Ok((parsed, z))
}

fn cmd_special(cfg: &RunConfig) -> Result<String> {
    let (parsed, z) = compute_special(cfg)?;
    let mut record = z.record();
    record.ring = parsed.ring.id();
    record.character_info = parsed.chi.as_ref().map(|c| c.info());
    pretty(&record)
}

fn cmd_trivzero(cfg: &RunConfig) -> Result<String> {
    let format = cfg.format_or(Format::Csv)?;
    let (parsed, z) = compute_special(cfg)?;
    match (&parsed.chi, &z) {
        (None, _) => {
            let rep = report_from_special(&parsed.ring, &z)?;
            match format {
                Format::Csv => Ok(format!("{}\n{}\n", TrivialZeroReport::CSV_HEADER, rep.csv_row())),
                Format::Json => pretty(&rep),
            }
        }
        (Some(chi), AnySpecial::Base { ring, poly }) => {
            // No a-priori order at infinity for nontrivial characters; report
            // detected roots of unity instead.
            let ext = cfg.ext.unwrap_or(1);
            let roots = unit_root_multiplicities(ring, &poly.coeffs, ext)?;
            pretty(&json!({
                "ring": parsed.ring.id(),
                "char": chi.designation(),
                "j": poly.j,
                "kind": "detected",
                "extension_degree": ext,
                "root_field": roots.field.info(),
                "unit_root_multiplicities": roots.rendered(),
            }))
        }
        _ => unreachable!("characters are rejected on curve rings"),
    }
}

fn cmd_newton(cfg: &RunConfig) -> Result<String> {
    let (parsed, z) = compute_special(cfg)?;
    let place = cfg.place.as_deref().unwrap_or("infty");
    let np = match (&z, ScanPlace::parse(&parsed.ring, place)?) {
        (AnySpecial::Base { ring, poly }, ScanPlace::Infty) => newton_polygon_infty(ring, &poly.coeffs),
        (AnySpecial::Curve { spec, poly }, ScanPlace::Infty) => newton_polygon_infty(spec.as_ref(), &poly.coeffs),
        (AnySpecial::Base { ring, poly }, ScanPlace::Finite(v)) => {
            let v = match &parsed.chi {
                Some(chi) => chi.embed_poly(&v),
                None => v,
            };
            if !ring.is_irreducible(&v)? {
                return Err(Error::NotIrreducible(ring.render(&v)));
            }
            newton_polygon_at_v(ring, &poly.coeffs, &v)
        }
        (AnySpecial::Curve { .. }, ScanPlace::Finite(_)) => unreachable!("rejected by place parsing"),
    };
    let check = rh_simplicity_check(&np);
    pretty(&json!({
        "ring": parsed.ring.id(),
        "char": parsed.chi.as_ref().map_or("trivial".to_string(), |c| c.designation()),
        "j": z.j(),
        "place": place,
        "newton_polygon": np,
        "np_slopes": np.slopes_string(),
        "simplicity": check,
    }))
}

fn cmd_vadic(cfg: &RunConfig) -> Result<String> {
    let base = base_ring_from_r(cfg)?;
    let v = base.parse(&RunConfig::require(&cfg.v, "v")?)?;
    let j = RunConfig::require(&cfg.j, "j")?;
    let chi = cfg
        .character
        .as_deref()
        .map(DirichletCharacter::from_designation)
        .transpose()?;
    if let Some(congr) = &cfg.congr {
        if congr.len() != 2 {
            return Err(Error::InvalidInput("--congr takes J2 N".into()));
        }
    }
    let vs = vadic_special_polynomial(&base, chi.as_ref(), &v, j)?;
    let order = if cfg.order.unwrap_or(false) {
        if chi.is_some() {
            return Err(Error::InvalidInput("--order supports the trivial character only".into()));
        }
        Some(vadic_trivial_zero_order(&base, &v, j)?)
    } else {
        None
    };
    let continuity = match &cfg.congr {
        Some(c) => {
            let n = u32::try_from(c[1]).map_err(|_| Error::InvalidInput("--congr N is too large".into()))?;
            Some(vadic_continuity_check(&base, chi.as_ref(), &v, j, c[0], n)?)
        }
        None => None,
    };
    let np = vs.newton_polygon();
    pretty(&json!({
        "special": vs.record(&format!("fqt:{}", base.q())),
        "newton_polygon": np,
        "np_slopes": np.slopes_string(),
        "order": order,
        "continuity": continuity,
    }))
}

fn cmd_scan(cfg: &RunConfig) -> Result<Outcome> {
    let ring = ZetaRing::parse(&RunConfig::require(&cfg.ring, "ring")?)?;
    if cfg.character.is_some() {
        return Err(Error::InvalidInput("scan supports the trivial character only".into()));
    }
    let place = ScanPlace::parse(&ring, cfg.place.as_deref().unwrap_or("infty"))?;
    let j_max = cfg.jmax.unwrap_or_else(|| place.default_jmax(&ring));
    let format = cfg.format_or(Format::Csv)?;
    if cfg.workers == Some(0) {
        return Err(Error::InvalidInput("--workers must be at least 1".into()));
    }
    let opts = ScanOptions {
        workers: cfg.workers,
        checkpoint: cfg.resume.clone(),
        timestamp: cfg.timestamp.clone(),
        ..Default::default()
    };
    let report = scan_nonclassical_set(&ring, &place, j_max, &opts)?;
    let text = render_report(&report, format)?;
    let Some(out) = &cfg.out else {
        return Ok(Outcome { text, written_to: None });
    };
    let path = out_path(out);
    write_atomic(&path, text.as_bytes())?;
    let mut summary = json!({
        "out": path,
        "ring": report.ring.id,
        "place": report.place,
        "j_max": report.j_max,
        "entries": report.entries.len(),
        "nonclassical_set": report.nonclassical_set,
        "max_lp_nonclassical": report.max_lp_nonclassical,
        "closure_violations": report.closure_violations,
        "anomaly": report.anomaly,
    });
    if cfg.analysis.unwrap_or(false) {
        summary["analysis"] = serde_json::to_value(digit_closure_analysis(&report))?;
        if let Ok(view) = hayes_shift_view(&report) {
            summary["hayes_shift_view"] = serde_json::to_value(view)?;
        }
    }
    Ok(Outcome {
        text: pretty(&summary)?,
        written_to: Some(path),
    })
}

fn cmd_char(cfg: &RunConfig) -> Result<String> {
    let chi = DirichletCharacter::from_designation(&RunConfig::require(&cfg.character, "char")?)?;
    pretty(&json!({
        "designation": chi.designation(),
        "principal": chi.is_principal(),
        "info": chi.info(),
    }))
}

fn cmd_family(cfg: &RunConfig) -> Result<String> {
    let base = base_ring_from_r(cfg)?;
    let d = RunConfig::require(&cfg.d, "d")?;
    let n = RunConfig::require(&cfg.n, "n")?;
    let y = PadicExponent::parse(base.p(), &RunConfig::require(&cfg.y, "y")?)?;
    let coeffs = family_coefficient(&base, d, &y, n)?;
    let field = base.field();
    pretty(&json!({
        "ring": format!("fqt:{}", base.q()),
        "d": d,
        "y_digits": y.digits,
        "precision": n,
        "pi_coeffs": coeffs.iter().map(|&c| field.render(c)).collect::<Vec<_>>(),
    }))
}

fn cmd_profile(cfg: &RunConfig) -> Result<String> {
    let ring = ZetaRing::parse(&RunConfig::require(&cfg.ring, "ring")?)?;
    let j_min = cfg.jmin.unwrap_or(0);
    let j_max = RunConfig::require(&cfg.jmax, "jmax")?;
    if j_min > j_max {
        return Err(Error::InvalidInput(format!("--jmin {j_min} exceeds --jmax {j_max}")));
    }
    let rows = degree_profile(&ring, j_min..=j_max)?;
    match cfg.format_or(Format::Csv)? {
        Format::Json => pretty(&json!({ "ring": ring.id(), "rows": rows })),
        Format::Csv => {
            let mut s = String::from("j,deg_u,l_r,envelope,within_envelope\n");
            for r in rows {
                s.push_str(&format!("{},{},{},{},{}\n", r.j, r.deg_u, r.l_r, r.envelope, r.within_envelope));
            }
            Ok(s)
        }
    }
}

/// Remediation hint printed under an error.
pub fn hint(e: &Error) -> &'static str {
    match e {
        Error::TruncationInsufficient { .. } => "rerun with a larger --dmax",
        Error::NotATrivialZero { .. } => "choose j >= 1 with j divisible by r - 1",
        Error::RamifiedPlace(_) => "pick a place v coprime to the character modulus",
        Error::UnsupportedPlaceDegree(_) => "use a degree-1 place such as v=T",
        Error::InvalidPair { .. } => "choose j2 congruent to j modulo the printed modulus",
        Error::PrecisionExceedsDigits { .. } => "supply more digits with --y or lower --n",
        Error::Checkpoint(_) => "delete or move the checkpoint file, or point --resume elsewhere",
        Error::Io { .. } => "check that the path exists and is writable",
        Error::NotIrreducible(_) => "character moduli and places must be irreducible",
        Error::InvalidIndex { .. } => "k must be smaller than r^deg(f) - 1",
        _ if e.is_config_error() => "see charp-zeros --help for the accepted values",
        _ => "this indicates an internal inconsistency; please report it",
    }
}

/// Process exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_config_error() {
        2
    } else {
        1
    }
}
