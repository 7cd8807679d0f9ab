//! `quasilattice`: build cut-and-project schemes and run the point-set,
//! density, summation and sampling experiments from the command line.
//!
//! Exit codes: 0 success (or "exists"), 1 parse or input error,
//! 2 obstructed group, 3 numerical failure.

mod commands;
mod io;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "quasilattice", version, about = "Cut-and-project schemes, model sets and sampling experiments")]
struct Cli {
    /// Run every loop on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Scheme construction.
    Scheme {
        #[command(subcommand)]
        action: SchemeAction,
    },
    /// Decide whether a complete scheme exists over R^m x G.
    Exists(ExistsArgs),
    /// Enumerate a model set inside an observation box.
    Points(PointsArgs),
    /// Box-counting density estimates against the theoretical value.
    Density(DensityArgs),
    /// Check Poisson summation for a Gaussian on the lifted lattice.
    Poisson(PoissonArgs),
    /// Convergence of normalized Riesz sums to their limit.
    Nl(NlArgs),
    /// Frame-bound sweep over random spectra.
    Sweep(SweepArgs),
    /// Interpolation/sampling probe for a window pair.
    Duality(DualityArgs),
}

#[derive(Subcommand, Debug)]
enum SchemeAction {
    /// Build a scheme from a descriptor and write it as JSON.
    Build {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct ExistsArgs {
    /// GroupSpec JSON, or a scheme descriptor.
    #[arg(long)]
    pub spec: PathBuf,
    /// Internal dimension; defaults to the descriptor's `m`.
    #[arg(long)]
    pub m: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct WindowArgs {
    /// Window JSON (`{"boxes": [{"lo": [..], "hi": [..]}]}`).
    #[arg(long, conflicts_with = "interval")]
    pub window: Option<PathBuf>,
    /// Single-box window `lo:hi[,lo:hi...]`.
    #[arg(long, allow_hyphen_values = true)]
    pub interval: Option<String>,
}

#[derive(Args, Debug)]
pub struct PointsArgs {
    /// Scheme JSON from `scheme build`, or a descriptor.
    #[arg(long)]
    pub scheme: PathBuf,
    #[command(flatten)]
    pub window: WindowArgs,
    /// Spectrum JSON; enumerates the dual model set instead.
    #[arg(long, conflicts_with_all = ["window", "interval"])]
    pub spectrum: Option<PathBuf>,
    /// Observation box `lo:hi[,lo:hi...]`.
    #[arg(long, allow_hyphen_values = true)]
    pub obs: String,
    #[arg(long)]
    pub out: PathBuf,
    /// Scatter plot of physical against internal coordinate (m = d = 1).
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DensityArgs {
    #[arg(long)]
    pub scheme: PathBuf,
    #[command(flatten)]
    pub window: WindowArgs,
    #[arg(long, conflicts_with_all = ["window", "interval"])]
    pub spectrum: Option<PathBuf>,
    /// Largest cube side; sides lmax/100, lmax/10 and lmax are counted.
    #[arg(long, default_value_t = 1000.0)]
    pub lmax: f64,
    #[arg(long, default_value_t = 16)]
    pub translates: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct PoissonArgs {
    #[arg(long)]
    pub scheme: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Number of random evaluation points.
    #[arg(long, default_value_t = 8)]
    pub points: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Use the dual lifted lattice.
    #[arg(long)]
    pub dual: bool,
    /// Largest accepted |lhs - rhs|.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct NlArgs {
    #[arg(long)]
    pub scheme: PathBuf,
    /// Radii 10, 100, ... up to rmax.
    #[arg(long, default_value_t = 1000.0)]
    pub rmax: f64,
    /// Explicit comma-separated radii (overrides --rmax).
    #[arg(long, value_delimiter = ',')]
    pub rs: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1.0)]
    pub sigma_phi: f64,
    #[arg(long, default_value_t = 0.05)]
    pub sigma_psi: f64,
    /// Test-function JSON (overrides the Gaussian widths).
    #[arg(long)]
    pub test_fn: Option<PathBuf>,
    #[arg(long, default_value_t = 8)]
    pub translates: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long)]
    pub scheme: PathBuf,
    /// Window `lo:hi` of the sampled quasicrystal; defaults to `[0, s(H))`,
    /// the window of density one.
    #[arg(long, allow_hyphen_values = true)]
    pub interval: Option<String>,
    #[arg(long, value_delimiter = ',', default_value = "0.5,0.8,1.0,1.25")]
    pub ratios: Vec<f64>,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    /// Side of the observation box [0, L).
    #[arg(long = "L", default_value_t = 500.0)]
    pub l: f64,
    /// Frequency grid step; defaults to 1/L.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Real band `lo:hi` holding the random spectra.
    #[arg(long, allow_hyphen_values = true)]
    pub band: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub theta_a: Option<f64>,
    #[arg(long)]
    pub theta_i: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
    /// Plot of Aest against the ratio.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DualityArgs {
    #[arg(long)]
    pub scheme: PathBuf,
    #[command(flatten)]
    pub window: WindowArgs,
    #[arg(long)]
    pub spectrum: PathBuf,
    #[arg(long = "L", default_value_t = 120.0)]
    pub l: f64,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub theta_a: Option<f64>,
    #[arg(long)]
    pub theta_i: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let exec = if cli.sequential { quasilattice::Exec::Sequential } else { quasilattice::Exec::default() };
    let result = match cli.command {
        Command::Scheme { action: SchemeAction::Build { spec, out } } => commands::scheme_build(&spec, &out),
        Command::Exists(a) => commands::exists(&a),
        Command::Points(a) => commands::points(&a, exec),
        Command::Density(a) => commands::density(&a, exec),
        Command::Poisson(a) => commands::poisson(&a),
        Command::Nl(a) => commands::nl(&a, exec),
        Command::Sweep(a) => commands::sweep(&a, exec),
        Command::Duality(a) => commands::duality(&a, exec),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("quasilattice: {e}");
            ExitCode::from(e.code() as u8)
        }
    }
}
