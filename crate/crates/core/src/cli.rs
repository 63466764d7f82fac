//! The `radon` command-line tool.
//!
//! Exit codes: 0 success (or a ball verdict), 1 obstruction or failed comparison,
//! 2 usage or input error, 3 numeric failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::{moment_report, rigidity_check, sinogram_slabs, Tolerances};
use crate::config::{build_sinogram, BodySpec, FunctionSpec};
use crate::error::{Error, Result};
use crate::fourier::{inverse_wave_kernel_2d, radial_fourier_2d};
use crate::geometry::{Direction, Hyperplane, Vector};
use crate::io::{fmt_f64, load, save, write_csv};
use crate::oracles::{self, GammaFamilySpec};
use crate::transforms::{direction_grid, radon, Quadrature, Sinogram, SinogramOptions, TestFunction, TransformKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_OBSTRUCTION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "RADON_THREADS";

#[derive(Debug, Parser)]
#[command(name = "radon", version, about = "Radon/X-ray transforms on convex bodies and a rigidity analyzer")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a transform on a direction × offset grid.
    Sinogram(SinogramArgs),
    /// Compare numeric transforms with closed forms.
    VerifyOracle(VerifyArgs),
    /// Decide whether a sinogram forces a ball.
    Rigidity(AnalysisArgs),
    /// Zeroth and first moments of a sinogram.
    Moments(AnalysisArgs),
    /// Fourier transform of the constant X-ray function against 2 sin(R|ξ|)/|ξ|.
    FourierSlice(FourierArgs),
}

#[derive(Debug, Args, Clone)]
pub struct GridArgs {
    /// Number of directions.
    #[arg(long, default_value_t = 64)]
    pub dirs: usize,
    /// Offsets per direction (at least 16).
    #[arg(long, default_value_t = 128)]
    pub offsets: usize,
    /// Gauss–Legendre nodes.
    #[arg(long, default_value_t = Quadrature::DEFAULT_NODES)]
    pub nodes: usize,
    /// Angular nodes for spatial sections.
    #[arg(long, default_value_t = Quadrature::DEFAULT_ANGULAR)]
    pub angular: usize,
    /// Seed for a random shift or rotation of the direction grid.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct PhantomArgs {
    /// Body as inline JSON or a path to a JSON file.
    #[arg(long)]
    pub body: Option<String>,
    /// Function name (constant-xray, indicator, synthetic-g, gamma:<γ>), inline JSON or a path.
    #[arg(long)]
    pub function: Option<String>,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Args)]
pub struct SinogramArgs {
    #[command(flatten)]
    pub phantom: PhantomArgs,
    #[arg(long, value_enum, default_value_t = TransformArg::Radon)]
    pub transform: TransformArg,
    /// CSV output path; the sidecar goes next to it with a .json extension.
    /// Without it the CSV is written to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TransformArg {
    Radon,
    Xray,
}

#[derive(Debug, Args)]
pub struct AnalysisArgs {
    /// Sinogram CSV to analyze instead of generating one from --body/--function.
    #[arg(long, conflicts_with_all = ["body", "function"])]
    pub sinogram: Option<PathBuf>,
    #[command(flatten)]
    pub phantom: PhantomArgs,
    #[arg(long, default_value_t = crate::analysis::DEFAULT_BINS)]
    pub bins: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub tol_k: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub tol_linearity: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub tol_center: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub tol_width: f64,
    #[arg(long, default_value_t = 1e-4)]
    pub tol_collapse: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub tol_collapse_floor: f64,
    /// JSON report path (stdout otherwise).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleMode {
    Radon,
    FourierSlice,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = OracleMode::Radon)]
    pub mode: OracleMode,
    /// Dimensions to test (radon mode).
    #[arg(long, value_delimiter = ',', default_values_t = [2usize])]
    pub dimension: Vec<usize>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_values_t = [-0.5, 0.0, 1.0, 2.5])]
    pub gamma: Vec<f64>,
    /// Plane distances from the center (radon mode).
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.25, 0.5, 0.75, 0.9])]
    pub d: Vec<f64>,
    /// Frequencies |ξ| (fourier-slice mode).
    #[arg(long, value_delimiter = ',', default_values_t = [0.5, 1.0, 2.0, 5.0])]
    pub xi: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long, default_value_t = Quadrature::DEFAULT_NODES)]
    pub nodes: usize,
    /// Largest accepted relative error (default 1e-6 radon, 1e-4 fourier-slice).
    #[arg(long)]
    pub tol: Option<f64>,
    /// CSV table path (stdout otherwise).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FourierArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [0.5, 1.0, 2.0, 5.0, 10.0])]
    pub xi: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long, default_value_t = Quadrature::DEFAULT_NODES)]
    pub nodes: usize,
    #[arg(long, default_value_t = 1e-4)]
    pub tol: f64,
    /// |x| values for the inverse-kernel spot check at t = 1 (empty to skip).
    #[arg(long, value_delimiter = ',', default_values_t = [0.3, 0.6])]
    pub kernel_radii: Vec<f64>,
    #[arg(long, default_value_t = 1e-3)]
    pub kernel_tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Maps library errors onto exit codes.
pub fn exit_code(err: &Error) -> i32 {
    if err.is_numeric() {
        EXIT_NUMERIC
    } else {
        EXIT_USAGE
    }
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let pool = match thread_pool() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    match pool.install(|| execute(&cli.command)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| Error::Parse(format!("{THREADS_ENV} must be a positive integer, got '{v}'")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Numeric(format!("cannot start worker threads: {e}")))
}

fn execute(cmd: &Command) -> Result<i32> {
    match cmd {
        Command::Sinogram(a) => cmd_sinogram(a),
        Command::VerifyOracle(a) => cmd_verify_oracle(a),
        Command::Rigidity(a) => cmd_rigidity(a),
        Command::Moments(a) => cmd_moments(a),
        Command::FourierSlice(a) => cmd_fourier_slice(a),
    }
}

/// Inline JSON, or the contents of the named file.
fn json_argument(arg: &str) -> Result<String> {
    if arg.trim_start().starts_with('{') {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(arg).map_err(|e| Error::Parse(format!("cannot read '{arg}': {e}")))
}

fn function_argument(arg: &str) -> Result<FunctionSpec> {
    let t = arg.trim();
    if t.starts_with('{') || FunctionSpec::parse(t).is_ok() {
        return FunctionSpec::parse(t);
    }
    FunctionSpec::parse(&json_argument(t)?)
}

fn generate(p: &PhantomArgs, transform: TransformKind) -> Result<Sinogram> {
    let body = p.body.as_deref().ok_or_else(|| Error::Parse("--body is required".into()))?;
    let function = p.function.as_deref().ok_or_else(|| Error::Parse("--function is required".into()))?;
    let body = BodySpec::parse(&json_argument(body)?)?;
    let function = function_argument(function)?;
    let g = &p.grid;
    let directions = direction_grid(body.dimension, g.dirs, g.seed)?;
    let opts = SinogramOptions { offsets: g.offsets, quadrature: Quadrature::new(g.nodes, g.angular)?, transform };
    build_sinogram(&body, &function, &directions, &opts)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn cmd_sinogram(a: &SinogramArgs) -> Result<i32> {
    let transform = match a.transform {
        TransformArg::Radon => TransformKind::Radon,
        TransformArg::Xray => TransformKind::Xray,
    };
    let sino = generate(&a.phantom, transform)?;
    match &a.out {
        Some(path) => save(&sino, path)?,
        None => write_csv(&sino, std::io::stdout().lock())?,
    }
    Ok(EXIT_OK)
}

fn analysis_input(a: &AnalysisArgs) -> Result<Sinogram> {
    match &a.sinogram {
        Some(path) => load(path).map_err(|e| match e {
            Error::Io(io) => Error::Parse(format!("cannot read '{}': {io}", path.display())),
            e => e,
        }),
        None => generate(&a.phantom, TransformKind::Radon),
    }
}

fn tolerances(a: &AnalysisArgs) -> Tolerances {
    Tolerances {
        k_spread: a.tol_k,
        linearity: a.tol_linearity,
        center: a.tol_center,
        width: a.tol_width,
        collapse: a.tol_collapse,
        collapse_floor: a.tol_collapse_floor,
    }
}

pub fn cmd_rigidity(a: &AnalysisArgs) -> Result<i32> {
    let sino = analysis_input(a)?;
    let slabs = sinogram_slabs(&sino)?;
    let report = rigidity_check(&sino, &slabs, &tolerances(a), a.bins)?;
    emit(a.out.as_deref(), &to_json(&report)?)?;
    match &report.obstruction {
        None => eprintln!(
            "verdict: ball (center {:?}, radius {})",
            report.estimates.center.as_slice(),
            report.estimates.radius
        ),
        Some(o) => eprintln!("verdict: obstruction ({o}); failing checks: {}", report.failures.join(", ")),
    }
    Ok(if report.is_ball() { EXIT_OK } else { EXIT_OBSTRUCTION })
}

pub fn cmd_moments(a: &AnalysisArgs) -> Result<i32> {
    let sino = analysis_input(a)?;
    let slabs = sinogram_slabs(&sino)?;
    let report = moment_report(&sino, &slabs)?;
    emit(a.out.as_deref(), &to_json(&report)?)?;
    Ok(EXIT_OK)
}

/// A fixed generic direction, so the comparison does not sit on a coordinate axis.
fn probe_direction(dim: usize) -> Result<Direction> {
    match dim {
        2 => Ok(Direction::from_angle(0.7)),
        3 => Direction::normalize(Vector::xyz(0.2, -0.5, 0.8)),
        _ => Err(Error::UnsupportedDimension(dim)),
    }
}

fn relative_error(numeric: f64, closed: f64) -> f64 {
    if closed == 0.0 {
        numeric.abs()
    } else {
        ((numeric - closed) / closed).abs()
    }
}

/// Comparison rows: label columns, numeric, closed form, error.
struct Table {
    text: String,
    worst: f64,
}

impl Table {
    fn new(header: &str) -> Self {
        Self { text: format!("{header},numeric,closed,error\n"), worst: 0.0 }
    }

    fn row(&mut self, labels: &[f64], numeric: f64, closed: f64, err: f64) {
        for l in labels {
            let _ = write!(self.text, "{},", fmt_f64(*l));
        }
        let _ = writeln!(self.text, "{},{},{}", fmt_f64(numeric), fmt_f64(closed), fmt_f64(err));
        self.worst = self.worst.max(err);
    }
}

pub fn cmd_verify_oracle(a: &VerifyArgs) -> Result<i32> {
    let quad = Quadrature::new(a.nodes, Quadrature::DEFAULT_ANGULAR)?;
    let (table, tol) = match a.mode {
        OracleMode::Radon => {
            let mut t = Table::new("dimension,gamma,d");
            for &dim in &a.dimension {
                let omega = probe_direction(dim)?;
                for &gamma in &a.gamma {
                    let spec = GammaFamilySpec::new(a.radius, gamma, dim)?;
                    let f = TestFunction::gamma_family(Vector::zeros(dim)?, a.radius, gamma)?;
                    for &d in &a.d {
                        if !(d >= 0.0 && d < a.radius) {
                            return Err(Error::Domain(format!("plane distance {d} must lie in [0, {})", a.radius)));
                        }
                        let numeric = radon(&f, &Hyperplane::new(omega, d), &quad)?;
                        let closed = oracles::radon_gamma(&spec, d)?;
                        t.row(&[dim as f64, gamma, d], numeric, closed, relative_error(numeric, closed));
                    }
                }
            }
            (t, a.tol.unwrap_or(1e-6))
        }
        OracleMode::FourierSlice => (fourier_table(a.radius, &a.xi, &quad)?, a.tol.unwrap_or(1e-4)),
    };
    emit(a.out.as_deref(), &table.text)?;
    eprintln!("max error {:e} (tolerance {tol:e})", table.worst);
    Ok(if table.worst < tol { EXIT_OK } else { EXIT_OBSTRUCTION })
}

fn fourier_table(radius: f64, xi: &[f64], quad: &Quadrature) -> Result<Table> {
    let f = TestFunction::constant_xray(Vector::xy(0.0, 0.0), radius)?;
    let mut t = Table::new("xi");
    for &k in xi {
        let numeric = radial_fourier_2d(&f, k, quad)?;
        let closed = oracles::fourier_slice_constant_radon(radius, k)?;
        t.row(&[k], numeric, closed, (numeric - closed).abs());
    }
    Ok(t)
}

pub fn cmd_fourier_slice(a: &FourierArgs) -> Result<i32> {
    let quad = Quadrature::new(a.nodes, Quadrature::DEFAULT_ANGULAR)?;
    let slice = fourier_table(a.radius, &a.xi, &quad)?;
    let mut text = slice.text;
    let mut kernel_worst = 0.0f64;
    if !a.kernel_radii.is_empty() {
        text.push_str("\nx,kernel_im,closed,error,kernel_re\n");
        for &r in &a.kernel_radii {
            let (re, im) = inverse_wave_kernel_2d(1.0, r, 2e-3)?;
            let closed = oracles::inverse_kernel_2d(1.0, &Vector::xy(r, 0.0))?;
            let err = (im - closed).abs().max(re.abs());
            kernel_worst = kernel_worst.max(err);
            let _ =
                writeln!(text, "{},{},{},{},{}", fmt_f64(r), fmt_f64(im), fmt_f64(closed), fmt_f64(err), fmt_f64(re));
        }
    }
    emit(a.out.as_deref(), &text)?;
    eprintln!(
        "slice error {:e} (tolerance {:e}); kernel error {kernel_worst:e} (tolerance {:e})",
        slice.worst, a.tol, a.kernel_tol
    );
    Ok(if slice.worst < a.tol && kernel_worst < a.kernel_tol { EXIT_OK } else { EXIT_OBSTRUCTION })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_error_kinds() {
        assert_eq!(exit_code(&Error::Numeric("x".into())), EXIT_NUMERIC);
        assert_eq!(exit_code(&Error::Parse("x".into())), EXIT_USAGE);
        let wrapped = Error::Sample { direction: 0, offset: 0.0, source: Box::new(Error::Numeric("x".into())) };
        assert_eq!(exit_code(&wrapped), EXIT_NUMERIC);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run(["radon"]), EXIT_USAGE);
        assert_eq!(run(["radon", "sinogram", "--dirs", "x"]), EXIT_USAGE);
        assert_eq!(run(["radon", "sinogram", "--function", "indicator"]), EXIT_USAGE);
        assert_eq!(
            run(["radon", "sinogram", "--body", "/nonexistent/ball.json", "--function", "indicator"]),
            EXIT_USAGE
        );
        let ball = r#"{"dimension":2,"kind":"ball","radius":1}"#;
        assert_eq!(run(["radon", "sinogram", "--body", ball, "--function", "indicator", "--offsets", "8"]), EXIT_USAGE);
        assert_eq!(run(["radon", "verify-oracle", "--d", "1.5"]), EXIT_USAGE);
    }

    #[test]
    fn function_arguments() {
        assert!(matches!(function_argument("gamma:1").unwrap(), FunctionSpec::Gamma { .. }));
        assert!(function_argument("/nonexistent/f.json").is_err());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.json");
        std::fs::write(&path, r#"{"kind":"indicator","scale":2}"#).unwrap();
        assert_eq!(function_argument(path.to_str().unwrap()).unwrap(), FunctionSpec::Indicator { scale: 2.0 });
    }
}
