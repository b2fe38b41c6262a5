//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage/input/IO error, 2 numerical failure,
//! 3 verification failure.

pub mod feasibility;
pub mod parse;
pub mod plot;
pub mod presets;
pub mod sweep;

use std::ffi::OsString;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geoamp::{AmplitudeOptions, ClosedFormOptions, KVariant};
use crate::oracle::{verify_all, GridKind, VerifyConfig};
use crate::surface::CurvatureCoefficients;
use feasibility::{check_feasibility, FeasibilityInput};
use parse::{parse_complex, parse_energy, parse_length, parse_list, parse_mass_ratio, Grid};
use sweep::{Axis, Curve, SweepSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "geoscatter", version, about = "Geometric scattering off a Gaussian bump with line defects")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Cross section against kσ (--kgrid) or θ (--thetagrid).
    Sweep(SweepArgs),
    /// Cross section against θ for several curvature settings.
    Angular(AngularArgs),
    /// Check the closed forms against quadrature.
    Verify(VerifyArgs),
    /// Check whether a barrier behaves like a delta line.
    Feasibility(FeasibilityArgs),
    /// Render a sweep CSV as SVG.
    Plot(PlotArgs),
    /// Regenerate a figure panel.
    Preset(PresetArgs),
}

#[derive(Debug, Args)]
struct SystemArgs {
    /// Incidence angle in degrees.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    theta0_deg: f64,
    /// Defect positions α, comma separated.
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    defects: String,
    /// Couplings σ𝔷 (a+bi allowed); one value applies to every defect.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    couplings: String,
    #[arg(long, default_value_t = 0.1)]
    eta: f64,
    /// Comma list; paired with --lambda2.
    #[arg(long, default_value = "0.5", allow_hyphen_values = true)]
    lambda1: String,
    #[arg(long, default_value = "-0.5", allow_hyphen_values = true)]
    lambda2: String,
    #[arg(long, default_value = "kappa2")]
    kmmnn_variant: String,
    /// Regularization offset at singular A' (radians).
    #[arg(long, default_value_t = AmplitudeOptions::default().epsilon)]
    epsilon: f64,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// CSV path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write an SVG, next to --out unless a path is given.
    #[arg(long, num_args = 0..=1)]
    svg: Option<Option<PathBuf>>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    system: SystemArgs,
    /// Scattering angles in degrees, one curve each (k-scan).
    #[arg(long, default_value = "5,30,45,60,90,175", allow_hyphen_values = true)]
    theta_deg: String,
    /// kσ grid lo:hi:n.
    #[arg(long, conflicts_with = "thetagrid")]
    kgrid: Option<String>,
    /// θ grid in degrees lo:hi:n.
    #[arg(long, allow_hyphen_values = true)]
    thetagrid: Option<String>,
    /// kσ values, one curve each (θ scan).
    #[arg(long, default_value = "1")]
    ksigma: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct AngularArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[arg(long, default_value = "-90:270:721", allow_hyphen_values = true)]
    thetagrid: String,
    #[arg(long, default_value = "1")]
    ksigma: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Smaller grid (s ∈ {0.3, 1}, kσ ∈ {0.5, 2}, two curvature settings).
    #[arg(long)]
    reduced: bool,
    /// Write every comparison as JSON lines.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, default_value = "kappa2")]
    kmmnn_variant: String,
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Debug, Args)]
struct FeasibilityArgs {
    /// Barrier height (eV, meV, keV).
    #[arg(long)]
    v0: String,
    /// Barrier width (nm, pm, A, um, m).
    #[arg(long)]
    rho: String,
    /// Effective mass in electron masses.
    #[arg(long)]
    mass: String,
    /// Particle energy.
    #[arg(long)]
    energy: String,
    /// Bump width; defaults to the σ giving σ𝔷 = 1.
    #[arg(long)]
    sigma: Option<String>,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct PlotArgs {
    input: PathBuf,
    /// Defaults to the input path with an .svg extension.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PresetArgs {
    /// fig1-left … fig5-right.
    name: String,
    /// Override the number of grid points.
    #[arg(long)]
    points: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Overflow(_)
        | Error::Domain(_)
        | Error::SingularMatrix { .. }
        | Error::SingularAngle { .. }
        | Error::NonConvergence { .. } => EXIT_NUMERICAL,
        Error::InvalidInput(_) | Error::Parse { .. } | Error::Io(_) => EXIT_USAGE,
    }
}

fn lambda_pairs(l1: &str, l2: &str) -> Result<Vec<CurvatureCoefficients>> {
    let a = parse_list(l1, "lambda1")?;
    let b = parse_list(l2, "lambda2")?;
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::invalid(format!(
            "--lambda1 and --lambda2 need equally many values, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    a.into_iter().zip(b).map(|(x, y)| CurvatureCoefficients::new(x, y)).collect()
}

fn build_spec(sys: &SystemArgs, axis: Axis, fixed: &[f64]) -> Result<SweepSpec> {
    let positions = parse_list(&sys.defects, "defects")?;
    let mut couplings: Vec<Complex64> = if sys.couplings.trim().is_empty() {
        Vec::new()
    } else {
        sys.couplings.split(',').map(parse_complex).collect::<Result<_>>()?
    };
    if couplings.len() == 1 && positions.len() != 1 {
        couplings = vec![couplings[0]; positions.len()];
    }
    let pairs = lambda_pairs(&sys.lambda1, &sys.lambda2)?;
    if fixed.is_empty() {
        return Err(Error::invalid("no curves requested"));
    }
    let curves = fixed.iter().flat_map(|&f| pairs.iter().map(move |&cc| Curve { fixed: f, cc })).collect();
    let spec = SweepSpec {
        axis,
        curves,
        theta0_deg: sys.theta0_deg,
        positions,
        couplings,
        eta: sys.eta,
        kmmnn: sys.kmmnn_variant.parse()?,
        epsilon: sys.epsilon,
    };
    spec.validate()?;
    Ok(spec)
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn emit(spec: &SweepSpec, out: &OutputArgs) -> Result<()> {
    let csv = sweep::run_sweep(spec)?;
    write_out(out.out.as_deref(), &csv)?;
    if let Some(svg) = &out.svg {
        let path = match (svg, &out.out) {
            (Some(p), _) => p.clone(),
            (None, Some(o)) => o.with_extension("svg"),
            (None, None) => return Err(Error::invalid("--svg without a path needs --out")),
        };
        fs::write(path, plot::render_svg(&sweep::read_sweep(&csv)?)?)?;
    }
    Ok(())
}

fn run_sweep_cmd(a: &SweepArgs) -> Result<()> {
    let spec = match (&a.kgrid, &a.thetagrid) {
        (Some(g), None) => build_spec(&a.system, Axis::K(g.parse::<Grid>()?), &parse_list(&a.theta_deg, "theta-deg")?)?,
        (None, Some(g)) => build_spec(&a.system, Axis::Theta(g.parse::<Grid>()?), &parse_list(&a.ksigma, "ksigma")?)?,
        _ => return Err(Error::invalid("sweep needs exactly one of --kgrid or --thetagrid")),
    };
    emit(&spec, &a.output)
}

fn run_angular(a: &AngularArgs) -> Result<()> {
    let spec = build_spec(&a.system, Axis::Theta(a.thetagrid.parse()?), &parse_list(&a.ksigma, "ksigma")?)?;
    emit(&spec, &a.output)
}

fn run_verify(a: &VerifyArgs) -> Result<i32> {
    let cfg = VerifyConfig {
        grid: if a.reduced { GridKind::Reduced } else { GridKind::Full },
        forms: ClosedFormOptions {
            kmmnn: a.kmmnn_variant.parse::<KVariant>()?,
            inject_fault: a.inject_fault,
            ..Default::default()
        },
        ..Default::default()
    };
    let started = std::time::Instant::now();
    let report = verify_all(&cfg)?;
    if let Some(p) = &a.report {
        let f = std::io::BufWriter::new(fs::File::create(p)?);
        report.write_jsonl(f)?;
    }
    let mut out = std::io::stdout().lock();
    writeln!(out, "grid: {}", if a.reduced { "reduced" } else { "full" })?;
    for (key, matched, total) in report.variant_summary() {
        writeln!(out, "{key:<32} {matched:>5}/{total:<5}")?;
    }
    writeln!(
        out,
        "{} checks, {} failures, {:.1} s: {}",
        report.checks(),
        report.failures(),
        started.elapsed().as_secs_f64(),
        if report.passed() { "PASS" } else { "FAIL" }
    )?;
    Ok(if report.passed() { EXIT_OK } else { EXIT_VERIFY })
}

fn run_feasibility(a: &FeasibilityArgs) -> Result<()> {
    let v0 = parse_energy(&a.v0)?;
    let rho = parse_length(&a.rho)?;
    let mass_ratio = parse_mass_ratio(&a.mass)?;
    let energy = parse_energy(&a.energy)?;
    let sigma = match &a.sigma {
        Some(s) => parse_length(s)?,
        None => FeasibilityInput::unit_coupling_sigma(v0, rho, mass_ratio),
    };
    let report = check_feasibility(&FeasibilityInput { v0, rho, mass_ratio, energy, sigma })?;
    let mut out = std::io::stdout().lock();
    if a.json {
        serde_json::to_writer_pretty(&mut out, &report).map_err(std::io::Error::from)?;
        writeln!(out)?;
    } else {
        writeln!(out, "sigma = {sigma:.6e} nm")?;
        write!(out, "{report}")?;
    }
    Ok(())
}

fn run_plot(a: &PlotArgs) -> Result<()> {
    let text = fs::read_to_string(&a.input)?;
    let svg = plot::render_svg(&sweep::read_sweep(&text)?)?;
    let out = a.out.clone().unwrap_or_else(|| a.input.with_extension("svg"));
    fs::write(out, svg)?;
    Ok(())
}

fn dispatch(cli: Cli) -> Result<i32> {
    match &cli.command {
        Command::Sweep(a) => run_sweep_cmd(a)?,
        Command::Angular(a) => run_angular(a)?,
        Command::Verify(a) => return run_verify(a),
        Command::Feasibility(a) => run_feasibility(a)?,
        Command::Plot(a) => run_plot(a)?,
        Command::Preset(a) => emit(&presets::preset(&a.name, a.points)?, &a.output)?,
    }
    Ok(EXIT_OK)
}

/// Runs the tool on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
