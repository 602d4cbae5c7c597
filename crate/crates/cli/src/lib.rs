//! Batch front end for the `twopoint` toolkit.
//!
//! Exit codes: 0 check passed, 1 usage or runtime error, 2 inequality
//! violated, 3 geometric hypothesis violated (report still written).

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;
use std::path::PathBuf;
use twopoint::capacity::{
    green_identity_sides, potential_field, separation_inequality_check, solve_condenser, Condenser, GridSpec,
    WalkBudget,
};
use twopoint::covering::{check_delta_covering, check_gamma_covering, CoveringVerdict, DEFAULT_CURVE_SAMPLES, DEFAULT_FAMILY_SAMPLES};
use twopoint::curves::{Branch, DeltaCurve, GammaCircle};
use twopoint::geometry::DomainSpec;
use twopoint::inequalities::{
    extremal_schwarzian_map, goluzin_extremal_map, goluzin_report, schwarzian_report, BoundReport, Hypothesis,
    DEFAULT_SLACK_TOL,
};
use twopoint::report::{render_report, Format, ReportItem};
use twopoint::svg::{render_svg, Curve, Scene};
use twopoint::{DiskPoint, Error, RationalMap, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_VIOLATED: i32 = 2;
pub const EXIT_HYPOTHESIS: i32 = 3;

/// Seed used when neither `--seed` nor `TWOPOINT_SEED` is given.
pub const DEFAULT_SEED: u64 = 0x7a3c_91d5_04e2_b86f;

#[derive(Parser, Debug)]
#[command(name = "twopoint", version, about = "Two-point distortion bounds, covering checks and condenser capacities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Hyperbolic two-point bound with its covering hypothesis.
    Goluzin(BoundArgs),
    /// Schwarzian two-point bound with its covering hypothesis.
    Schwarzian(BoundArgs),
    /// Covering check of the Γ or Δ family through f(z1), f(z2).
    Covering(CoveringArgs),
    /// Condenser capacity, separation check, or Green level identity.
    Capacity(CapacityArgs),
    /// Equality cases on a λ grid.
    Extremal(ExtremalArgs),
    /// Both bounds at random point pairs.
    Scan(ScanArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    /// Report file; standard output when absent.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    pub format: ReportFormat,
    /// Also render an SVG scene.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl From<ReportFormat> for Format {
    fn from(f: ReportFormat) -> Self {
        match f {
            ReportFormat::Json => Format::Json,
            ReportFormat::Csv => Format::Csv,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct MapArgs {
    /// Map as inline JSON (`{"numerator": [[re, im], ...], ...}`) or a path.
    #[arg(long, required_unless_present = "extremal_lambda")]
    pub map: Option<String>,
    /// Use the extremal map for parameter λ instead.
    #[arg(long, conflicts_with = "map")]
    pub extremal_lambda: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct PairArgs {
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub z1: Complex64,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub z2: Complex64,
}

#[derive(Args, Debug, Clone)]
pub struct BoundArgs {
    #[command(flatten)]
    pub map: MapArgs,
    #[command(flatten)]
    pub pair: PairArgs,
    /// Skip the covering hypothesis check.
    #[arg(long)]
    pub no_covering: bool,
    /// Slack above `−tol` counts as holding.
    #[arg(long, default_value_t = DEFAULT_SLACK_TOL)]
    pub tol: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyArg {
    Gamma,
    Delta,
    Both,
}

#[derive(Args, Debug, Clone)]
pub struct CoveringArgs {
    #[command(flatten)]
    pub map: MapArgs,
    #[command(flatten)]
    pub pair: PairArgs,
    #[arg(long, value_enum, default_value_t = FamilyArg::Both)]
    pub family: FamilyArg,
    #[arg(long, default_value_t = DEFAULT_CURVE_SAMPLES)]
    pub curve_samples: usize,
    #[arg(long, default_value_t = DEFAULT_FAMILY_SAMPLES)]
    pub family_samples: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Clone)]
pub struct CapacityArgs {
    /// Condenser as inline JSON or a path.
    #[arg(long, required_unless_present = "identity")]
    pub condenser: Option<String>,
    #[arg(long, default_value_t = 1024)]
    pub cells: usize,
    #[arg(long)]
    pub richardson: bool,
    /// Annular patches around plates below grid resolution.
    #[arg(long)]
    pub patch: bool,
    #[arg(long, requires = "patch")]
    pub hole_radius: Option<f64>,
    /// Compare with half the summed sector capacities.
    #[arg(long, conflicts_with = "identity")]
    pub separation: bool,
    /// Relative tolerance of the separation check.
    #[arg(long, default_value_t = 0.03)]
    pub rel_tol: f64,
    /// Dump the potential as a flat binary grid.
    #[arg(long)]
    pub field: Option<PathBuf>,
    /// Check the level subdomain identity at `--z1`, `--z2` instead.
    #[arg(long, requires_all = ["z1", "z2"])]
    pub identity: bool,
    /// Base domain of the identity check, inline JSON or a path.
    #[arg(long, default_value = r#"{"kind":"unit_disk"}"#)]
    pub base: String,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub z1: Option<Complex64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub z2: Option<Complex64>,
    /// Standard error target of each walk estimate of `log r`.
    #[arg(long, default_value_t = 2e-4)]
    pub walk_tol: f64,
    #[arg(long, default_value_t = 1 << 24)]
    pub max_walks: usize,
    /// Admitted residual of the identity check.
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
    #[arg(long, env = "TWOPOINT_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremalKind {
    Schwarzian,
    Goluzin,
}

#[derive(Args, Debug, Clone)]
pub struct ExtremalArgs {
    #[arg(long, value_enum, default_value_t = ExtremalKind::Schwarzian)]
    pub kind: ExtremalKind,
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9])]
    pub lambdas: Vec<f64>,
    /// Admitted |slack|.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Clone)]
pub struct ScanArgs {
    #[command(flatten)]
    pub map: MapArgs,
    #[arg(long, default_value_t = 100)]
    pub pairs: usize,
    /// Points are drawn from `|z| < max_radius`.
    #[arg(long, default_value_t = 0.9)]
    pub max_radius: f64,
    #[arg(long)]
    pub covering: bool,
    #[arg(long, default_value_t = DEFAULT_SLACK_TOL)]
    pub tol: f64,
    #[arg(long, env = "TWOPOINT_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

/// Complex literal: `0.5`, `-2i`, `i`, `0.3-0.2i`, `1e-3+4e-2i`.
pub fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("invalid complex number '{s}'");
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) else {
        return t.parse::<f64>().map(|x| Complex64::new(x, 0.0)).map_err(|_| bad());
    };
    // split before the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |p: &str| -> std::result::Result<f64, String> {
        match p {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => p.parse::<f64>().map_err(|_| bad()),
        }
    };
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().map_err(|_| bad())?;
            Ok(Complex64::new(re, imag(&body[k..])?))
        }
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}

fn inline_or_file(s: &str) -> Result<String> {
    let t = s.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        Ok(s.to_string())
    } else {
        Ok(std::fs::read_to_string(s)?)
    }
}

fn load_map(args: &MapArgs, kind: ExtremalKind) -> Result<RationalMap> {
    match (&args.map, args.extremal_lambda) {
        (Some(m), _) => RationalMap::from_json(&inline_or_file(m)?),
        (None, Some(l)) => match kind {
            ExtremalKind::Schwarzian => extremal_schwarzian_map(l),
            ExtremalKind::Goluzin => goluzin_extremal_map(l, Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)),
        },
        (None, None) => Err(Error::InvalidMap("no map given".into())),
    }
}

fn write_report(items: &[ReportItem], output: &Output) -> Result<()> {
    let text = render_report(items, output.format.into())?;
    match &output.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn write_svg(scene: &Scene, output: &Output) -> Result<()> {
    if let Some(path) = &output.svg {
        std::fs::write(path, render_svg(scene)?)?;
    }
    Ok(())
}

fn circle(c: Complex64, r: f64, n: usize) -> Curve {
    Curve { points: (0..n).map(|k| c + Complex64::from_polar(r, TAU * k as f64 / n as f64)).collect(), closed: true }
}

fn bound_exit(reports: &[BoundReport], tol: f64) -> i32 {
    if reports.iter().any(|r| r.hypothesis == Hypothesis::CheckedViolated) {
        EXIT_HYPOTHESIS
    } else if reports.iter().all(|r| r.holds(tol)) {
        EXIT_OK
    } else {
        EXIT_VIOLATED
    }
}

/// Γ and Δ members through `w1`, `w2` for display.
fn family_scene(w1: Complex64, w2: Complex64, witnesses: &[Complex64]) -> Result<Scene> {
    let mut curves = Vec::new();
    for s in [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0] {
        let t = GammaCircle::new(w1, w2, s)?.trace(256)?;
        curves.push(Curve { points: t.points, closed: !t.is_line });
    }
    curves.push(Curve { points: GammaCircle::line(w1, w2)?.trace(256)?.points, closed: false });
    for t in [0.5, 1.0, 2.0] {
        for b in [Branch::Plus, Branch::Minus] {
            curves.push(Curve { points: DeltaCurve::new(w1, w2, t, b)?.trace(256)?, closed: true });
        }
    }
    let mut points = vec![w1, w2];
    points.extend_from_slice(witnesses);
    Ok(Scene { curves, points, outline: None, field: None })
}

fn run_bound(args: &BoundArgs, schwarzian: bool) -> Result<i32> {
    let kind = if schwarzian { ExtremalKind::Schwarzian } else { ExtremalKind::Goluzin };
    let map = load_map(&args.map, kind)?;
    let (z1, z2) = (DiskPoint::new(args.pair.z1)?, DiskPoint::new(args.pair.z2)?);
    let check = !args.no_covering;
    let report = if schwarzian {
        schwarzian_report(&map, z1, z2, check)?
    } else {
        goluzin_report(&map, z1, z2, check)?
    };
    write_report(&[report.clone().into()], &args.output)?;
    if args.output.svg.is_some() {
        let w: Vec<Complex64> = report.covering.iter().filter_map(|v| v.witness.as_ref().map(|w| w.w)).collect();
        write_svg(&family_scene(map.eval(z1.z())?, map.eval(z2.z())?, &w)?, &args.output)?;
    }
    Ok(bound_exit(&[report], args.tol))
}

fn run_covering(args: &CoveringArgs) -> Result<i32> {
    let map = load_map(&args.map, ExtremalKind::Schwarzian)?;
    let (z1, z2) = (DiskPoint::new(args.pair.z1)?, DiskPoint::new(args.pair.z2)?);
    let (n, m) = (args.curve_samples, args.family_samples);
    let mut verdicts: Vec<CoveringVerdict> = Vec::new();
    if matches!(args.family, FamilyArg::Gamma | FamilyArg::Both) {
        verdicts.push(check_gamma_covering(&map, z1, z2, n, m)?);
    }
    if matches!(args.family, FamilyArg::Delta | FamilyArg::Both) {
        verdicts.push(check_delta_covering(&map, z1, z2, n, m)?);
    }
    let items: Vec<ReportItem> = verdicts.iter().cloned().map(Into::into).collect();
    write_report(&items, &args.output)?;
    if args.output.svg.is_some() {
        let w: Vec<Complex64> = verdicts.iter().filter_map(|v| v.witness.as_ref().map(|w| w.w)).collect();
        write_svg(&family_scene(map.eval(z1.z())?, map.eval(z2.z())?, &w)?, &args.output)?;
    }
    Ok(if verdicts.iter().all(CoveringVerdict::passed) { EXIT_OK } else { EXIT_HYPOTHESIS })
}

fn domain_outline(d: &DomainSpec) -> Option<Curve> {
    let n = 256;
    match d {
        DomainSpec::UnitDisk => Some(circle(Complex64::new(0.0, 0.0), 1.0, n)),
        DomainSpec::Disk { center, radius } => Some(circle(*center, *radius, n)),
        DomainSpec::HalfDisk { side } => {
            let s = match side {
                twopoint::geometry::Side::Left => 1.0,
                twopoint::geometry::Side::Right => -1.0,
            };
            let points = (0..=n).map(|k| Complex64::from_polar(1.0, TAU / 4.0 * s + TAU / 2.0 * k as f64 / n as f64 * s)).collect();
            Some(Curve { points, closed: true })
        }
        _ => None,
    }
}

fn run_capacity(args: &CapacityArgs) -> Result<i32> {
    if args.identity {
        let base: DomainSpec = serde_json::from_str(&inline_or_file(&args.base)?)?;
        let budget = WalkBudget::default().with_seed(args.seed).with_tolerance(args.walk_tol).with_max_walks(args.max_walks);
        let (z1, z2) = (args.z1.expect("required by clap"), args.z2.expect("required by clap"));
        let sides = green_identity_sides(&base, z1, z2, &budget)?;
        let text = serde_json::json!({
            "lhs": sides.lhs,
            "rhs": sides.rhs,
            "residual": sides.residual(),
            "stderr": sides.stderr,
            "seed": args.seed,
        });
        emit_value(&text, &args.output)?;
        return Ok(if sides.residual() <= args.tol { EXIT_OK } else { EXIT_VIOLATED });
    }
    let c = Condenser::from_json(&inline_or_file(args.condenser.as_deref().expect("required by clap"))?)?;
    let mut grid = GridSpec::new(args.cells);
    if args.richardson {
        grid = grid.with_richardson();
    }
    if args.patch {
        grid = grid.with_patches(args.hole_radius);
    }
    let code = if args.separation {
        let s = separation_inequality_check(&c, &grid)?;
        emit_value(&serde_json::to_value(&s)?, &args.output)?;
        if s.lhs >= s.rhs * (1.0 - args.rel_tol) {
            EXIT_OK
        } else {
            EXIT_VIOLATED
        }
    } else {
        let e = solve_condenser(&c, &grid)?;
        write_report(&[e.into()], &args.output)?;
        EXIT_OK
    };
    if args.field.is_some() || args.output.svg.is_some() {
        let f = potential_field(&c, args.cells.min(512))?;
        if let Some(path) = &args.field {
            f.write(path)?;
        }
        let plates = c.plates().iter().map(|p| circle(p.center, p.radius, 64)).collect();
        let scene = Scene { curves: plates, points: vec![], outline: domain_outline(c.domain()), field: Some(f.to_scalar_field()) };
        write_svg(&scene, &args.output)?;
    }
    Ok(code)
}

/// Single JSON object as a one-element array (JSON) or a key/value table.
fn emit_value(v: &serde_json::Value, output: &Output) -> Result<()> {
    let text = match output.format {
        ReportFormat::Json => serde_json::to_string_pretty(&[v])? + "\n",
        ReportFormat::Csv => {
            let obj = v.as_object().ok_or(Error::EmptyReport)?;
            let cell = |x: &serde_json::Value| match x.as_f64() {
                Some(f) if x.is_f64() => twopoint::report::num(f),
                _ => x.to_string(),
            };
            let (mut keys, mut vals) = (Vec::new(), Vec::new());
            for (k, x) in obj {
                // arrays become numbered columns
                match x.as_array() {
                    Some(xs) => {
                        for (i, y) in xs.iter().enumerate() {
                            keys.push(format!("{k}_{}", i + 1));
                            vals.push(cell(y));
                        }
                    }
                    None => {
                        keys.push(k.clone());
                        vals.push(cell(x));
                    }
                }
            }
            format!("{}\n{}\n", keys.join(","), vals.join(","))
        }
    };
    match &output.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run_extremal(args: &ExtremalArgs) -> Result<i32> {
    let mut reports = Vec::new();
    for &l in &args.lambdas {
        let (z1, z2) = (DiskPoint::new(Complex64::new(-l, 0.0))?, DiskPoint::new(Complex64::new(l, 0.0))?);
        let r = match args.kind {
            ExtremalKind::Schwarzian => schwarzian_report(&extremal_schwarzian_map(l)?, z1, z2, false)?,
            ExtremalKind::Goluzin => {
                goluzin_report(&goluzin_extremal_map(l, Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0))?, z1, z2, false)?
            }
        };
        reports.push(r);
    }
    let items: Vec<ReportItem> = reports.iter().cloned().map(Into::into).collect();
    write_report(&items, &args.output)?;
    if let (Some(&l), Some(_)) = (args.lambdas.first(), &args.output.svg) {
        let map = match args.kind {
            ExtremalKind::Schwarzian => extremal_schwarzian_map(l)?,
            ExtremalKind::Goluzin => goluzin_extremal_map(l, Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0))?,
        };
        let image: Vec<Complex64> = (0..1024)
            .filter_map(|k| map.eval(Complex64::from_polar(1.0, TAU * (k as f64 + 0.5) / 1024.0)).ok())
            .filter(|w| w.norm() < 1e6)
            .collect();
        let points = vec![map.eval(Complex64::new(-l, 0.0))?, map.eval(Complex64::new(l, 0.0))?];
        let outline = matches!(args.kind, ExtremalKind::Schwarzian).then(|| circle(Complex64::new(0.0, 0.0), 1.0, 256));
        let scene = Scene { curves: vec![Curve { points: image, closed: false }], points, outline, field: None };
        write_svg(&scene, &args.output)?;
    }
    let ok = reports.iter().all(|r| r.slack.abs() <= args.tol);
    Ok(if ok { EXIT_OK } else { EXIT_VIOLATED })
}

fn run_scan(args: &ScanArgs) -> Result<i32> {
    if !(args.max_radius > 0.0 && args.max_radius < 1.0) {
        return Err(Error::ParameterOutOfRange(format!("max radius {}", args.max_radius)));
    }
    let map = load_map(&args.map, ExtremalKind::Schwarzian)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut draw = || {
        let r = args.max_radius * rng.random::<f64>().sqrt();
        Complex64::from_polar(r, TAU * rng.random::<f64>())
    };
    let mut reports = Vec::new();
    for _ in 0..args.pairs {
        let (a, b) = (draw(), draw());
        let (z1, z2) = (DiskPoint::new(a)?, DiskPoint::new(b)?);
        // pairs at poles or critical points are skipped
        for r in [goluzin_report(&map, z1, z2, args.covering), schwarzian_report(&map, z1, z2, args.covering)] {
            match r {
                Ok(r) => reports.push(r),
                Err(Error::PoleAtPoint(_) | Error::CriticalPoint(..) | Error::CoincidentImages) => {}
                Err(e) => return Err(e),
            }
        }
    }
    let items: Vec<ReportItem> = reports.iter().cloned().map(Into::into).collect();
    write_report(&items, &args.output)?;
    Ok(bound_exit(&reports, args.tol))
}

pub fn run(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Goluzin(a) => run_bound(a, false),
        Command::Schwarzian(a) => run_bound(a, true),
        Command::Covering(a) => run_covering(a),
        Command::Capacity(a) => run_capacity(a),
        Command::Extremal(a) => run_extremal(a),
        Command::Scan(a) => run_scan(a),
    }
}

/// Variant name of an error, for the machine-readable error object.
fn error_kind(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
}

pub fn error_json(kind: &str, message: &str) -> String {
    serde_json::json!({ "error": { "kind": kind, "message": message } }).to_string()
}

/// Parses `args`, runs, and returns the exit code; errors go to stderr as
/// a JSON object.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return EXIT_OK;
            }
            eprintln!("{}", error_json("Usage", e.to_string().trim()));
            return EXIT_ERROR;
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", error_json(&error_kind(&e), &e.to_string()));
            EXIT_ERROR
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        let c = |re, im| Complex64::new(re, im);
        assert_eq!(parse_complex("0.5").unwrap(), c(0.5, 0.0));
        assert_eq!(parse_complex("-0.5").unwrap(), c(-0.5, 0.0));
        assert_eq!(parse_complex("0.5i").unwrap(), c(0.0, 0.5));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("0.3-0.2i").unwrap(), c(0.3, -0.2));
        assert_eq!(parse_complex("1e-3+4e-2i").unwrap(), c(1e-3, 4e-2));
        assert_eq!(parse_complex("-1e-3-i").unwrap(), c(-1e-3, -1.0));
        assert_eq!(parse_complex(" 0.1 + 0.2i ").unwrap(), c(0.1, 0.2));
        assert!(parse_complex("").is_err());
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("1+2").is_err());
    }

    #[test]
    fn error_kinds() {
        assert_eq!(error_kind(&Error::CoincidentPoints), "CoincidentPoints");
        assert_eq!(error_kind(&Error::PlateOverlap(0, 1)), "PlateOverlap");
        assert_eq!(error_kind(&Error::GridTooCoarse { index: 0, radius: 1.0, h: 1.0 }), "GridTooCoarse");
    }
}
