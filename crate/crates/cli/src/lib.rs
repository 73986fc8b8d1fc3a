//! Command-line interface: argument parsing, run configuration files and
//! dispatch into `crossgreen-core`.

mod commands;
mod config;
mod output;

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use crossgreen_core::{Family, KernelKind, Manifold};

pub use config::RunConfig;

/// Exit status for success.
pub const EXIT_OK: i32 = 0;
/// Exit status for invalid input, arguments or files.
pub const EXIT_VALIDATION: i32 = 1;
/// Exit status for quadrature, interpolation or optimizer failures.
pub const EXIT_NUMERICAL: i32 = 2;

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) | CliError::Numerical(m) => f.write_str(m),
        }
    }
}

impl From<crossgreen_core::Error> for CliError {
    fn from(e: crossgreen_core::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Validation(e.to_string())
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "crossgreen", version, about = "Green energies on compact rank-one symmetric spaces")]
pub struct Cli {
    /// Worker threads; 1 gives the reproducibility reference.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimize the energy of N points with multi-start gradient descent.
    Solve(SolveArgs),
    /// Evaluate the energy of a configuration file.
    Energy(EnergyArgs),
    /// Potential, moment, discrepancy and separation diagnostics.
    Diagnose(DiagnoseArgs),
    /// Tabulate a kernel on a midpoint grid.
    KernelTable(TableArgs),
    /// Compare the ODE kernel with closed forms.
    KernelVerify(VerifyArgs),
    /// Tabulate v, tail, L and the ball CDF on a midpoint grid.
    RadialTable(RadialArgs),
    /// Run one of the above from a JSON run configuration.
    RunConfig(RunConfigArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct ManifoldArgs {
    /// S, RP, CP, HP or OP.
    #[arg(long, value_parser = parse_family)]
    pub family: Family,
    /// Family parameter, e.g. 3 for CP^3.
    #[arg(long)]
    pub n: u32,
}

impl ManifoldArgs {
    pub fn manifold(&self) -> CliResult<Manifold> {
        Ok(Manifold::new(self.family, self.n)?)
    }
}

#[derive(Debug, Clone, Args)]
pub struct KernelArgs {
    /// green, green-s2, green-cp3, green-cp4, log or riesz.
    #[arg(long, default_value = "green")]
    pub kernel: String,
    /// Riesz exponent.
    #[arg(long)]
    pub s: Option<f64>,
}

impl KernelArgs {
    pub fn kind(&self) -> CliResult<KernelKind> {
        parse_kernel(&self.kernel, self.s)
    }
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub manifold: ManifoldArgs,
    /// Number of points.
    #[arg(long = "N")]
    pub points: usize,
    #[command(flatten)]
    pub kernel: KernelArgs,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 8)]
    pub starts: usize,
    #[arg(long, default_value_t = 5000)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub grad_tol: f64,
    #[arg(long, default_value_t = 0.1)]
    pub initial_step: f64,
    #[arg(long, default_value_t = 1e-14)]
    pub min_step: f64,
    /// Tangent perturbations (only for N >= 50).
    #[arg(long)]
    pub perturb: bool,
    #[arg(long, default_value = "points.json")]
    pub out: PathBuf,
    /// CSV trace of the best run.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Also write the JSON report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct EnergyArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[command(flatten)]
    pub kernel: KernelArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct DiagnoseArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[command(flatten)]
    pub kernel: KernelArgs,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    /// Monte Carlo samples per potential test.
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    /// Number of configuration points used as potential base points.
    #[arg(long, default_value_t = 3)]
    pub potential_points: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct TableArgs {
    #[command(flatten)]
    pub manifold: ManifoldArgs,
    #[command(flatten)]
    pub kernel: KernelArgs,
    #[arg(long, default_value_t = 512)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub manifold: ManifoldArgs,
}

#[derive(Debug, Clone, Args)]
pub struct RadialArgs {
    #[command(flatten)]
    pub manifold: ManifoldArgs,
    #[arg(long, default_value_t = 512)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfigArgs {
    #[arg(long)]
    pub config: PathBuf,
}

fn parse_family(s: &str) -> Result<Family, String> {
    Family::from_tag(&s.to_ascii_uppercase())
        .ok_or_else(|| format!("unknown family {s:?}; expected S, RP, CP, HP or OP"))
}

pub fn parse_kernel(name: &str, s: Option<f64>) -> CliResult<KernelKind> {
    let kind = match name {
        "green" => KernelKind::GreenOde,
        "green-s2" => KernelKind::GreenClosedS2,
        "green-cp3" => KernelKind::GreenClosedCp3,
        "green-cp4" => KernelKind::GreenClosedCp4,
        "log" => KernelKind::Logarithmic,
        "riesz" => {
            let s = s.ok_or_else(|| CliError::Validation("--kernel riesz needs --s".into()))?;
            return Ok(KernelKind::Riesz(s));
        }
        other => {
            return Err(CliError::Validation(format!(
                "unknown kernel {other:?}; expected green, green-s2, green-cp3, green-cp4, log or riesz"
            )))
        }
    };
    if s.is_some() {
        return Err(CliError::Validation(format!("--s only applies to riesz, not {name}")));
    }
    Ok(kind)
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: Cli) -> CliResult<()> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Validation(format!("cannot start thread pool: {e}")))?;
    if cli.threads == Some(0) {
        return Err(CliError::Validation("--threads must be at least 1".into()));
    }
    pool.install(|| commands::dispatch(cli.command))
}
