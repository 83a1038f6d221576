//! Command-line front end for `cmc-core`: generate curves and surfaces,
//! validate them against the curvature oracles, audit the closed-form
//! special cases and export samples as CSV, OBJ and JSON.
//!
//! Exit codes: 0 success, 1 a validation failed, 2 usage or domain error.
//! Errors go to standard error as `ERROR[<code>]: <message>`.

use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use cmc_core::builders::{build, RotationalPatch, DEFAULT_V_WINDOW};
use cmc_core::curve::linspace;
use cmc_core::generator::{domain_validity, generate_scaled, CmcParams, SpecialConstants};
use cmc_core::geometry::Sign;
use cmc_core::quadrature::QuadratureConfig;
use cmc_core::surface::SurfacePatch;
use cmc_core::validation::{
    compare_special_case, evaluation_parameters, validate, GridSpec, Tolerances, ValidationOptions,
    ValidationReport, DEFAULT_FD_STEP, DEFAULT_GRID,
};
use cmc_core::{parse, Constants, GeneratingCurve, Jet2, ProfileFunction, RotationType, Vec4};

pub mod formats;
pub mod parallel;

use parallel::par_map;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(cmc_core::Error, Option<String>),
    Io(String),
    Format(String),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Core(e, _) => e.code(),
            CliError::Io(_) => "io",
            CliError::Format(_) => "format",
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Format(m) => f.write_str(m),
            CliError::Core(e, None) => write!(f, "{e}"),
            CliError::Core(e, Some(note)) => write!(f, "{e} ({note})"),
        }
    }
}

impl From<cmc_core::Error> for CliError {
    fn from(e: cmc_core::Error) -> Self {
        CliError::Core(e, None)
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(
    name = "cmc",
    version,
    about = "Constant mean curvature Lorentz rotational surfaces in E⁴₂"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a CMC generating curve and write it as CSV.
    Curve(CurveArgs),
    /// Sample the rotational surface of a generated curve (CSV and/or OBJ).
    Surface(SurfaceArgs),
    /// Generate (or read) a curve and check the CMC property and the frame identities.
    Validate(ValidateArgs),
    /// Compare a closed-form special-case angle with the quadrature integrand.
    Special(SpecialArgs),
    /// Cross-check closed-form and oracle mean curvature on an explicit curve.
    Oracle(OracleArgs),
}

fn num(s: &str) -> Result<f64, String> {
    let x: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a number"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

fn interval(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("`{s}` is not of the form a:b"))?;
    let (a, b) = (num(a)?, num(b)?);
    if a < b {
        Ok((a, b))
    } else {
        Err(format!("`{s}` needs a < b"))
    }
}

fn sign(s: &str) -> Result<Sign, String> {
    match s.trim() {
        "+1" | "1" | "+" => Ok(Sign::Plus),
        "-1" | "-" => Ok(Sign::Minus),
        _ => Err(format!("`{s}` is not a sign (+1 or -1)")),
    }
}

fn rotation(s: &str) -> Result<RotationType, String> {
    s.parse()
        .map_err(|_| format!("`{s}` is not one of elliptic, hyperbolicA, hyperbolicB, parabolic"))
}

fn constant(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("`{s}` is not of the form name=value"))?;
    let name = name.trim();
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(format!("`{name}` is not a valid constant name"));
    }
    Ok((name.to_string(), num(value)?))
}

/// Profile, CMC parameters and quadrature settings shared by the generating commands.
#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long = "type", value_parser = rotation)]
    kind: RotationType,
    /// Profile `r(u)` (elliptic, hyperbolic) or `f(u)` (parabolic).
    #[arg(long, allow_hyphen_values = true)]
    profile: Option<String>,
    /// Named constant for the profile, repeatable.
    #[arg(long = "const", value_name = "NAME=VALUE", value_parser = constant, allow_hyphen_values = true)]
    consts: Vec<(String, f64)>,
    /// Mean curvature constant; the target is ⟨H,H⟩ = hsign·C².
    #[arg(long = "C", value_parser = num, allow_hyphen_values = true)]
    c: f64,
    #[arg(long, value_parser = sign, default_value = "+1", allow_hyphen_values = true)]
    hsign: Sign,
    /// Sign in front of the angle integral.
    #[arg(long, value_parser = sign, default_value = "+1", allow_hyphen_values = true)]
    eta: Sign,
    /// Parabolic integration constant ψ(u0); same slot as --phi0.
    #[arg(long = "A", value_parser = num, allow_hyphen_values = true)]
    big_a: Option<f64>,
    /// Base point of the integrals (default: interval start).
    #[arg(long, value_parser = num, allow_hyphen_values = true)]
    u0: Option<f64>,
    #[arg(long, value_parser = num, allow_hyphen_values = true)]
    phi0: Option<f64>,
    #[arg(long, value_parser = num, default_value = "0", allow_hyphen_values = true)]
    c1: f64,
    #[arg(long, value_parser = num, default_value = "0", allow_hyphen_values = true)]
    c2: f64,
    #[arg(long, value_parser = interval, allow_hyphen_values = true)]
    interval: (f64, f64),
    /// Multiply the generated angle by this factor (1 leaves the curve CMC).
    #[arg(long, value_parser = num, default_value = "1", allow_hyphen_values = true)]
    perturb_phi: f64,
    #[arg(long, value_parser = num)]
    abs_tol: Option<f64>,
    #[arg(long, value_parser = num)]
    rel_tol: Option<f64>,
    #[arg(long)]
    max_depth: Option<u32>,
    /// Knot segments of the stored cumulative integrals.
    #[arg(long)]
    segments: Option<usize>,
}

#[derive(Args, Debug)]
struct GridArgs {
    #[arg(long)]
    nu: Option<usize>,
    #[arg(long)]
    nv: Option<usize>,
    #[arg(long, value_parser = interval, allow_hyphen_values = true)]
    v_window: Option<(f64, f64)>,
}

#[derive(Args, Debug)]
struct TolArgs {
    /// Finite-difference oracle step; 0 disables the oracle.
    #[arg(long, value_parser = num, default_value_t = DEFAULT_FD_STEP)]
    fd_step: f64,
    #[arg(long, value_parser = num)]
    tol_cmc: Option<f64>,
    #[arg(long, value_parser = num)]
    tol_cmc_fd: Option<f64>,
    #[arg(long, value_parser = num)]
    tol_arclength: Option<f64>,
    #[arg(long, value_parser = num)]
    tol_frame: Option<f64>,
    #[arg(long, value_parser = num)]
    tol_closed_frame: Option<f64>,
    #[arg(long, value_parser = num)]
    tol_sigma_xy: Option<f64>,
    #[arg(long, value_parser = num)]
    tol_closed: Option<f64>,
}

#[derive(Args, Debug)]
struct CurveArgs {
    #[command(flatten)]
    gen: GenArgs,
    /// Number of rows.
    #[arg(long, default_value_t = 201)]
    nu: usize,
    /// Output CSV (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SurfaceArgs {
    #[command(flatten)]
    gen: GenArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// Surface CSV `u,v,x1..x4` (default: standard output unless --obj is given).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    obj: Option<PathBuf>,
    /// Coordinates kept by the OBJ projection.
    #[arg(long, default_value = "x1,x3,x4")]
    project: String,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    #[command(flatten)]
    gen: GenArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    tol: TolArgs,
    /// Validate a curve CSV written by `cmc curve` instead of generating one.
    #[arg(long)]
    curve_csv: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SpecialArgs {
    #[arg(long = "type", value_parser = rotation)]
    kind: RotationType,
    #[arg(long, value_parser = num, default_value = "0", allow_hyphen_values = true)]
    a: f64,
    #[arg(long, value_parser = num, default_value = "0", allow_hyphen_values = true)]
    b: f64,
    #[arg(long, value_parser = num, default_value = "0", allow_hyphen_values = true)]
    d: f64,
    #[arg(long = "A", value_parser = num, default_value = "0", allow_hyphen_values = true)]
    big_a: f64,
    #[arg(long = "B", value_parser = num, default_value = "1", allow_hyphen_values = true)]
    big_b: f64,
    #[arg(long = "C", value_parser = num, allow_hyphen_values = true)]
    c: f64,
    #[arg(long, value_parser = sign, default_value = "+1", allow_hyphen_values = true)]
    hsign: Sign,
    #[arg(long, value_parser = sign, default_value = "+1", allow_hyphen_values = true)]
    eta: Sign,
    #[arg(long, value_parser = interval, allow_hyphen_values = true)]
    interval: (f64, f64),
    #[arg(long, default_value_t = 201)]
    samples: usize,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long = "type", value_parser = rotation)]
    kind: RotationType,
    #[arg(long, allow_hyphen_values = true)]
    x1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    x2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    x4: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    r: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    f: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    g: Option<String>,
    #[arg(long = "const", value_name = "NAME=VALUE", value_parser = constant, allow_hyphen_values = true)]
    consts: Vec<(String, f64)>,
    #[arg(long, value_parser = interval, allow_hyphen_values = true)]
    interval: (f64, f64),
    /// Expected ⟨H,H⟩; without it the CMC checks are reported but not judged.
    #[arg(long, value_parser = num, allow_hyphen_values = true)]
    target: Option<f64>,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    tol: TolArgs,
    #[arg(long)]
    report: Option<PathBuf>,
}

/// Parse `argv` (program name first), run the command and return the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let text = e.to_string();
            eprintln!(
                "ERROR[usage]: {}",
                first_line(&text).unwrap_or("invalid arguments")
            );
            return 2;
        }
    };
    let outcome = match cli.command {
        Command::Curve(a) => cmd_curve(a),
        Command::Surface(a) => cmd_surface(a),
        Command::Validate(a) => cmd_validate(a),
        Command::Special(a) => cmd_special(a),
        Command::Oracle(a) => cmd_oracle(a),
    };
    match outcome {
        Ok(Status::Ok) => 0,
        Ok(Status::Failed(names)) => {
            eprintln!("ERROR[validation-failed]: {}", names.join(", "));
            1
        }
        Err(e) => {
            eprintln!("ERROR[{}]: {e}", e.code());
            2
        }
    }
}

fn first_line(s: &str) -> Option<&str> {
    s.lines()
        .map(|l| l.trim_start_matches("error: ").trim())
        .find(|l| !l.is_empty())
}

enum Status {
    Ok,
    Failed(Vec<&'static str>),
}

fn constants(pairs: &[(String, f64)]) -> Constants {
    pairs.iter().cloned().collect()
}

fn quadrature(g: &GenArgs) -> QuadratureConfig {
    let d = QuadratureConfig::default();
    QuadratureConfig {
        abs_tol: g.abs_tol.unwrap_or(d.abs_tol),
        rel_tol: g.rel_tol.unwrap_or(d.rel_tol),
        max_depth: g.max_depth.unwrap_or(d.max_depth),
        segments: g.segments.unwrap_or(d.segments),
    }
}

fn params(g: &GenArgs) -> CliResult<CmcParams> {
    let phi0 = match (g.big_a, g.phi0) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "--A and --phi0 set the same constant; give one".into(),
            ))
        }
        (Some(_), None) if g.kind != RotationType::Parabolic => {
            return Err(CliError::Usage(
                "--A applies to parabolic curves; use --phi0".into(),
            ))
        }
        (a, p) => a.or(p).unwrap_or(0.0),
    };
    Ok(CmcParams {
        u0: g.u0,
        phi0,
        c1: g.c1,
        c2: g.c2,
        ..CmcParams::new(g.c, g.hsign, g.eta)
    })
}

fn profile(g: &GenArgs) -> CliResult<ProfileFunction> {
    let text = g
        .profile
        .as_deref()
        .ok_or_else(|| CliError::Usage("--profile is required".into()))?;
    Ok(ProfileFunction::parse(
        text,
        constants(&g.consts),
        g.interval,
    )?)
}

/// Generate the curve, adding the valid subintervals to domain errors.
fn generate(g: &GenArgs) -> CliResult<GeneratingCurve> {
    let prof = profile(g)?;
    let p = params(g)?;
    generate_scaled(g.kind, &prof, &p, &quadrature(g), g.interval, g.perturb_phi).map_err(|e| {
        if matches!(e, cmc_core::Error::InvalidParameter(_)) {
            return CliError::Core(e, None);
        }
        let valid = domain_validity(&prof, &p, g.interval, g.kind);
        let note = if valid.is_empty() {
            "no part of the interval is valid".to_string()
        } else {
            let parts: Vec<String> = valid.iter().map(|(a, b)| format!("{a}:{b}")).collect();
            format!("valid subintervals: {}", parts.join(" "))
        };
        CliError::Core(e, Some(note))
    })
}

fn surface_id(g: &GenArgs) -> String {
    format!("{}:{}", g.kind, g.profile.as_deref().unwrap_or(""))
}

fn components_at(curve: &GeneratingCurve, us: &[f64]) -> CliResult<Vec<(f64, [Jet2; 3])>> {
    par_map(us, |&u| curve.components(u).map(|c| (u, c)))
        .into_iter()
        .collect::<Result<_, _>>()
        .map_err(Into::into)
}

/// The patch with its curve evaluated once, in parallel, at every parameter
/// validation of `grid` touches.
fn tabulated(
    patch: &RotationalPatch,
    grid: &GridSpec,
    fd_step: Option<f64>,
) -> CliResult<RotationalPatch> {
    let curve = patch.curve();
    let us = evaluation_parameters(curve, grid, fd_step);
    let rows: Vec<_> = par_map(&us, |&u| curve.components(u).ok().map(|c| (u, c)))
        .into_iter()
        .flatten()
        .collect();
    Ok(patch.with_samples(rows)?)
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    match out {
        Some(p) => formats::write_atomic(p, bytes),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(bytes)
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn cmd_curve(a: CurveArgs) -> CliResult<Status> {
    if a.nu < 2 {
        return Err(CliError::Usage("--nu must be at least 2".into()));
    }
    let curve = generate(&a.gen)?;
    let rows = components_at(&curve, &linspace(a.gen.interval.0, a.gen.interval.1, a.nu))?;
    emit(a.out.as_deref(), &formats::curve_csv(curve.kind, &rows)?)?;
    Ok(Status::Ok)
}

fn patch_for(curve: GeneratingCurve, grid: &GridArgs) -> CliResult<RotationalPatch> {
    Ok(build(curve)?.with_v_window(grid.v_window.unwrap_or(DEFAULT_V_WINDOW)))
}

fn cmd_surface(a: SurfaceArgs) -> CliResult<Status> {
    let axes = formats::parse_projection(&a.project)?;
    let patch = patch_for(generate(&a.gen)?, &a.grid)?;
    let d = patch.domain();
    let grid = GridSpec::new(
        a.grid.nu.unwrap_or(DEFAULT_GRID),
        a.grid.nv.unwrap_or(DEFAULT_GRID),
        d.u,
        d.v,
    );
    grid.validate()?;
    let rows = components_at(patch.curve(), &grid.u_values())?;
    let patch = patch.with_samples(rows)?;
    let points: Vec<(f64, f64, Vec4)> = grid
        .points()
        .into_iter()
        .map(|(u, v)| patch.position(u, v).map(|p| (u, v, p)))
        .collect::<Result<_, _>>()?;
    if let Some(path) = &a.obj {
        let id = surface_id(&a.gen);
        formats::write_atomic(
            path,
            &formats::obj(&id, &a.project, axes, &points, grid.nu, grid.nv),
        )?;
    }
    if a.out.is_some() || a.obj.is_none() {
        emit(a.out.as_deref(), &formats::surface_csv(&points)?)?;
    }
    Ok(Status::Ok)
}

fn tolerances(t: &TolArgs) -> Tolerances {
    let d = Tolerances::default();
    Tolerances {
        cmc: t.tol_cmc.unwrap_or(d.cmc),
        cmc_fd: t.tol_cmc_fd.unwrap_or(d.cmc_fd),
        arclength: t.tol_arclength.unwrap_or(d.arclength),
        frame: t.tol_frame.unwrap_or(d.frame),
        closed_frame: t.tol_closed_frame.unwrap_or(d.closed_frame),
        sigma_xy: t.tol_sigma_xy.unwrap_or(d.sigma_xy),
        closed_vs_oracle: t.tol_closed.unwrap_or(d.closed_vs_oracle),
    }
}

fn fd_step(t: &TolArgs) -> CliResult<Option<f64>> {
    let h = t.fd_step;
    if h == 0.0 {
        Ok(None)
    } else if h > 0.0 {
        Ok(Some(h))
    } else {
        Err(CliError::Usage("--fd-step must be non-negative".into()))
    }
}

/// Report file layout: the report fields, then the verdict inputs.
#[derive(Serialize)]
struct ReportFile<'a> {
    #[serde(flatten)]
    report: &'a ValidationReport,
    tolerances: Tolerances,
    cmc_judged: bool,
    passed: bool,
    failures: Vec<&'static str>,
}

fn finish(
    report: &ValidationReport,
    tol: Tolerances,
    cmc_judged: bool,
    out: Option<&Path>,
) -> CliResult<Status> {
    let failures: Vec<&'static str> = report
        .failures(&tol)
        .into_iter()
        .filter(|f| cmc_judged || !matches!(*f, "cmc" | "cmc-fd"))
        .collect();
    let passed = failures.is_empty();
    if let Some(p) = out {
        let file = ReportFile {
            report,
            tolerances: tol,
            cmc_judged,
            passed,
            failures: failures.clone(),
        };
        formats::write_atomic(p, &formats::json(&file))?;
    }
    let fd = report
        .max_cmc_residual_fd
        .map_or("off".to_string(), |x| format!("{x:e}"));
    println!(
        "{} {} max_cmc_residual={:e} max_cmc_residual_fd={fd} max_closed_vs_oracle={:e} flagged={}",
        if passed { "PASS" } else { "FAIL" },
        report.surface_id,
        report.max_cmc_residual,
        report.max_closed_vs_oracle,
        report.flagged_points.len(),
    );
    Ok(if passed {
        Status::Ok
    } else {
        Status::Failed(failures)
    })
}

fn cmd_validate(a: ValidateArgs) -> CliResult<Status> {
    let tol = tolerances(&a.tol);
    let target = params(&a.gen)?.target_h2();
    let nv = a.grid.nv.unwrap_or(DEFAULT_GRID);
    let (id, patch, grid, fd) = match &a.curve_csv {
        Some(path) => {
            if a.grid.nu.is_some() {
                return Err(CliError::Usage(
                    "--nu does not apply to --curve-csv; the rows are the grid".into(),
                ));
            }
            let rows = formats::read_curve_csv(path, a.gen.kind)?;
            let (n, lo, hi) = (rows.len(), rows[0].0, rows[rows.len() - 1].0);
            if linspace(lo, hi, n)
                .iter()
                .zip(&rows)
                .any(|(u, r)| *u != r.0)
            {
                return Err(CliError::Format(format!(
                    "{}: rows must be evenly spaced in u",
                    path.display()
                )));
            }
            let patch = patch_for(GeneratingCurve::from_samples(a.gen.kind, rows)?, &a.grid)?;
            let grid = GridSpec::new(n, nv, (lo, hi), patch.v_window());
            // Tabulated curves have no values between rows for the oracle stencils.
            (format!("csv:{}", path.display()), patch, grid, None)
        }
        None => {
            let fd = fd_step(&a.tol)?;
            let patch = patch_for(generate(&a.gen)?, &a.grid)?;
            let mut grid = GridSpec::for_domain(patch.domain(), DEFAULT_GRID, fd.unwrap_or(0.0));
            grid.nu = a.grid.nu.unwrap_or(DEFAULT_GRID);
            grid.nv = nv;
            grid.validate()?;
            let patch = tabulated(&patch, &grid, fd)?;
            (surface_id(&a.gen), patch, grid, fd)
        }
    };
    let opts = ValidationOptions {
        fd_step: fd,
        tolerances: tol,
    };
    let report = validate(&id, &patch, target, &grid, &opts)?;
    finish(&report, tol, true, a.report.as_deref())
}

fn cmd_oracle(a: OracleArgs) -> CliResult<Status> {
    let tol = tolerances(&a.tol);
    let fd = fd_step(&a.tol)?;
    let consts = constants(&a.consts);
    let names: Vec<&str> = consts.keys().map(String::as_str).collect();
    let pick = |flag: &str, v: &Option<String>| -> CliResult<cmc_core::Expr> {
        let text = v
            .as_deref()
            .ok_or_else(|| CliError::Usage(format!("--{flag} is required for {}", a.kind)))?;
        Ok(parse(text, &names)?)
    };
    let [n0, n1, n2] = a.kind.component_names();
    let texts = |n: &str| match n {
        "x1" => &a.x1,
        "x2" => &a.x2,
        "x4" => &a.x4,
        "r" => &a.r,
        "f" => &a.f,
        _ => &a.g,
    };
    let exprs = [
        pick(n0, texts(n0))?,
        pick(n1, texts(n1))?,
        pick(n2, texts(n2))?,
    ];
    let curve = GeneratingCurve::from_exprs(a.kind, a.interval, exprs, consts);
    let patch = patch_for(curve, &a.grid)?;
    let mut grid = GridSpec::for_domain(patch.domain(), DEFAULT_GRID, fd.unwrap_or(0.0));
    grid.nu = a.grid.nu.unwrap_or(DEFAULT_GRID);
    grid.nv = a.grid.nv.unwrap_or(DEFAULT_GRID);
    grid.validate()?;
    let id = format!("{}:oracle", a.kind);
    let opts = ValidationOptions {
        fd_step: fd,
        tolerances: tol,
    };
    let report = validate(&id, &patch, a.target.unwrap_or(0.0), &grid, &opts)?;
    finish(&report, tol, a.target.is_some(), a.report.as_deref())
}

fn cmd_special(a: SpecialArgs) -> CliResult<Status> {
    let k = SpecialConstants {
        a: a.a,
        b: a.b,
        d: a.d,
        big_a: a.big_a,
        big_b: a.big_b,
    };
    let p = CmcParams::new(a.c, a.hsign, a.eta);
    let rep = compare_special_case(a.kind, &k, &p, a.interval, a.samples)?;
    if let Some(path) = &a.report {
        formats::write_atomic(path, &formats::json(&rep))?;
    }
    let verdict = serde_json::to_value(rep.verdict).expect("verdict serializes");
    println!(
        "{} verdict={} max_discrepancy={:e} max_discrepancy_other_sign={:e} max_rate={:e} eta_matched={}",
        rep.kind,
        verdict.as_str().unwrap_or("?"),
        rep.max_discrepancy,
        rep.max_discrepancy_other_sign,
        rep.max_rate,
        if rep.eta_matched == Sign::Plus { "+1" } else { "-1" },
    );
    Ok(Status::Ok)
}
