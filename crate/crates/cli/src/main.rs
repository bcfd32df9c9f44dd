//! `shrinker`: entropy bounds, closed-geodesic searches and curve checks for
//! self-shrinker profile curves.

mod commands;
mod context;
mod output;
mod plot;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use context::MetricArgs;
use output::OutputArgs;

#[derive(Debug, Parser)]
#[command(name = "shrinker", version, about = "Entropy bounds and closed geodesics for self-shrinkers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate curvature and entropy bounds.
    Bounds(BoundsArgs),
    /// Search for closed geodesics by perpendicular shooting.
    Shoot(ShootArgs),
    /// Certify a curve file as a geodesic and check the length bounds.
    Verify(VerifyArgs),
    /// Compare closed-form and finite-difference Gaussian curvature on a grid.
    CurvatureCheck(CurvatureArgs),
    /// Self-intersections and enclosed domains of a closed curve.
    Arrange(ArrangeArgs),
    /// Entropy of the shrinker with a certified profile curve.
    Entropy(EntropyArgs),
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Foliation g values (comma-separated).
    #[arg(long, value_delimiter = ',')]
    pub g: Vec<u32>,
    /// Multiplicities m (comma-separated).
    #[arg(long, value_delimiter = ',')]
    pub m: Vec<u32>,
    /// Rotational dimensions n (comma-separated).
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<u32>,
    /// Self-intersection counts for the immersed bound `(k+1)E_n`.
    #[arg(long, value_delimiter = ',')]
    pub k: Vec<u32>,
    #[arg(long)]
    pub allow_any_g: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ShootArgs {
    #[command(flatten)]
    pub metric: MetricArgs,
    /// Launch positions along the symmetry axis to scan.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    pub bracket: Option<Vec<f64>>,
    /// Closure tolerance for the secant refinement.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Residual threshold for certifying the returned loops.
    #[arg(long, default_value_t = shrinker_core::entropy::DEFAULT_RESIDUAL_THRESHOLD)]
    pub residual_tol: f64,
    /// Write each loop as a curve file (`PATH`, then `PATH-2`, ...).
    #[arg(long, value_name = "PATH")]
    pub curve: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub file: PathBuf,
    #[command(flatten)]
    pub metric: MetricArgs,
    /// Residual threshold for certification.
    #[arg(long, default_value_t = shrinker_core::entropy::DEFAULT_RESIDUAL_THRESHOLD)]
    pub tol: f64,
    /// Treat the curve as open (default: from metadata, else closed unless
    /// a rotational profile starts and ends on the axis).
    #[arg(long)]
    pub open: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CurvatureArgs {
    #[arg(long, value_delimiter = ',')]
    pub g: Vec<u32>,
    #[arg(long, value_delimiter = ',')]
    pub m: Vec<u32>,
    /// Grid nodes per side.
    #[arg(long, default_value_t = 50)]
    pub grid: usize,
    /// Largest accepted relative error.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long)]
    pub allow_any_g: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ArrangeArgs {
    /// Curve file; omit to generate a random polygon from `--seed`.
    #[arg(required_unless_present = "seed", conflicts_with = "seed")]
    pub file: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Vertex count of the random polygon.
    #[arg(long, default_value_t = 8, requires = "seed")]
    pub vertices: usize,
    /// Write the generated polygon as a curve file.
    #[arg(long, value_name = "PATH", requires = "seed")]
    pub curve: Option<PathBuf>,
    /// Metric for domain lengths (default: Euclidean).
    #[command(flatten)]
    pub metric: MetricArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    pub file: PathBuf,
    #[command(flatten)]
    pub metric: MetricArgs,
    #[arg(long, default_value_t = shrinker_core::entropy::DEFAULT_RESIDUAL_THRESHOLD)]
    pub tol: f64,
    #[arg(long)]
    pub open: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Bounds(a) => commands::bounds(a),
        Command::Shoot(a) => commands::shoot(a),
        Command::Verify(a) => commands::verify(a),
        Command::CurvatureCheck(a) => commands::curvature_check(a),
        Command::Arrange(a) => commands::arrange(a),
        Command::Entropy(a) => commands::entropy(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
