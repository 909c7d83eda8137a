//! `quatginibre` command-line front end.
//!
//! Exit status: 0 success, 2 invalid arguments or domain, 3 numerical or
//! verification failure, 4 I/O failure.

mod commands;
mod output;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use output::{Format, Sink};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "QUATGINIBRE_OUT_DIR";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
    Io(String),
    VerifyFailed(usize),
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) | CliError::VerifyFailed(_) | CliError::Internal(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "invalid input: {m}"),
            CliError::Numerical(m) => write!(f, "computation failed: {m}"),
            CliError::Io(m) => write!(f, "i/o failure: {m}"),
            CliError::VerifyFailed(n) => write!(f, "{n} verification check(s) failed"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl From<quatginibre::Error> for CliError {
    fn from(e: quatginibre::Error) -> Self {
        use quatginibre::Error as E;
        match e {
            E::Usage(_) | E::Domain(_) => CliError::Usage(e.to_string()),
            E::Numerical { .. } | E::Integrity(_) => CliError::Numerical(e.to_string()),
            E::Internal(_) => CliError::Internal(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "quatginibre", version, about = "Eigenvalue statistics of products of quaternion Ginibre matrices")]
pub struct Cli {
    /// Output directory [default: $QUATGINIBRE_OUT_DIR, else the current directory].
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,

    /// File name stem for the outputs [default: derived from the subcommand].
    #[arg(long, global = true)]
    pub name: Option<String>,

    /// csv writes tables plus a JSON sidecar; json writes one JSON document.
    #[arg(long, global = true, value_enum, default_value = "csv")]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Weight function w(r) on a radius grid.
    Weight(WeightArgs),
    /// Radial density tables (exact, scaled, asymptotic, limits).
    Radial(RadialArgs),
    /// Skew-orthogonal polynomial coefficients and norms h_k.
    Polys(PolysArgs),
    /// Prekernel values at pairs of points.
    Kernel(KernelArgs),
    /// k-point correlation function at a set of points.
    Corr(CorrArgs),
    /// Monte Carlo eigenvalues, radial histogram and comparison with the exact density.
    Sample(SampleArgs),
    /// Run the property suite and write a pass/fail report.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct EnsembleArgs {
    /// Number of factors.
    #[arg(long)]
    pub n: u32,
    /// Induced exponent m (default 0).
    #[arg(long, conflicts_with = "m_hat")]
    pub m: Option<f64>,
    /// Scaled induced exponent m̂ = m/N.
    #[arg(long)]
    pub m_hat: Option<f64>,
    /// Matrix size N (quaternion units).
    #[arg(long = "N", default_value_t = 1)]
    pub size: usize,
}

#[derive(Debug, Clone, Args)]
pub struct QuadratureArgs {
    /// Relative tolerance of the Meijer G contour integral.
    #[arg(long, default_value_t = 1e-10)]
    pub mb_rel_tol: f64,
    /// Pin the contour at Re s = c instead of the saddle point.
    #[arg(long)]
    pub mb_contour: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct WeightArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    /// Radius grid min:max:count[:log].
    #[arg(long, default_value = "0.01:5:100")]
    pub grid: String,
    /// Add the large-|z| approximation as a second column.
    #[arg(long)]
    pub asymptotic: bool,
    #[command(flatten)]
    pub quadrature: QuadratureArgs,
}

#[derive(Debug, Clone, Args)]
pub struct RadialArgs {
    /// exact | scaled | asymptotic | asymptotic_edge | macro | bulk | edge | origin
    #[arg(long, default_value = "exact")]
    pub mode: String,
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    /// Grid min:max:count[:log|lin] in the mode's variable [default depends on the mode].
    #[arg(long)]
    pub grid: Option<String>,
    #[command(flatten)]
    pub quadrature: QuadratureArgs,
}

#[derive(Debug, Clone, Args)]
pub struct PolysArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    /// Highest pair index K: p_0 … p_{2K+1} [default: N − 1].
    #[arg(long)]
    pub kmax: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct KernelArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    /// A pair of points u_re,u_im,v_re,v_im (repeatable).
    #[arg(long = "pair", required = true, value_parser = parse_pair)]
    pub pairs: Vec<(Complex64, Complex64)>,
}

#[derive(Debug, Clone, Args)]
pub struct CorrArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    /// A point re,im (repeatable).
    #[arg(long = "point", required = true, value_parser = parse_point)]
    pub points: Vec<Complex64>,
    /// Evaluate R_1 at each point instead of R_k at all points jointly.
    #[arg(long)]
    pub each: bool,
    #[command(flatten)]
    pub quadrature: QuadratureArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    /// Number of independent products.
    #[arg(long, default_value_t = 1000)]
    pub draws: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Divide eigenvalues by (2N)^(n/2) in the scatter and histogram.
    #[arg(long)]
    pub scaled: bool,
    /// Number of histogram bins.
    #[arg(long, default_value_t = 40)]
    pub bins: usize,
    /// Equal-width bins on [0, max] instead of equal-probability bins.
    #[arg(long)]
    pub bin_max: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Monte Carlo draws per histogram test.
    #[arg(long, default_value_t = 10_000)]
    pub draws: usize,
    /// Comma-separated criteria to run [default: all].
    #[arg(long, value_delimiter = ',')]
    pub criteria: Vec<u8>,
}

fn parse_numbers(s: &str, count: usize) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != count {
        return Err(format!("expected {count} comma-separated numbers, got {s:?}"));
    }
    parts
        .iter()
        .map(|p| p.trim().parse::<f64>().map_err(|_| format!("bad number {p:?}")))
        .collect()
}

fn parse_point(s: &str) -> Result<Complex64, String> {
    let v = parse_numbers(s, 2)?;
    Ok(Complex64::new(v[0], v[1]))
}

fn parse_pair(s: &str) -> Result<(Complex64, Complex64), String> {
    let v = parse_numbers(s, 4)?;
    Ok((Complex64::new(v[0], v[1]), Complex64::new(v[2], v[3])))
}

fn sink(cli: &Cli, default_stem: String) -> Sink {
    let dir = cli
        .out_dir
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    Sink {
        dir,
        stem: cli.name.clone().unwrap_or(default_stem),
        format: cli.format,
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Weight(a) => commands::weight(a, &sink(cli, "weight".into())),
        Command::Radial(a) => {
            let mode: quatginibre::radial::DensityMode = a.mode.parse()?;
            commands::radial(a, mode, &sink(cli, format!("radial_{}", mode.name())))
        }
        Command::Polys(a) => commands::polys(a, &sink(cli, "polys".into())),
        Command::Kernel(a) => commands::kernel(a, &sink(cli, "kernel".into())),
        Command::Corr(a) => commands::corr(a, &sink(cli, "corr".into())),
        Command::Sample(a) => commands::sample(a, &sink(cli, "sample".into())),
        Command::Verify(a) => commands::verify(a, &sink(cli, "verify".into())),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
