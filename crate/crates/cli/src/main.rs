//! `specgeom`: reproduce the annulus and cylinder tables, check the flow
//! identities, and report spectral gaps.
//!
//! Exit status: 0 all bands pass, 1 band failure, 2 configuration error,
//! 3 solver failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;
mod format;
mod svg;

use config::{DeficitChoice, RealList, SchemeChoice, SolverChoice, VelocityChoice};

#[derive(Parser, Debug)]
#[command(name = "specgeom", version, about = "Spectral geometry tables for planar annuli and perturbed cylinders")]
#[command(after_help = "Parameters resolve as: command-line flag, then --config file, then default.\n\
Config files hold `key = value` lines (keys as the long flag names, `#` comments). \
Every CSV starts with `#` lines echoing the effective configuration; strip the `# ` \
prefix from all but the first to obtain a config that reproduces the run.\n\n\
Exit status: 0 pass, 1 band failure, 2 configuration error, 3 solver failure.")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Capacity energy, deficit and first eigenvalue for annuli of inner radius `inner`.
    AnnulusTable(AnnulusTableArgs),
    /// Finite-difference ground eigenvalue of the conformally perturbed flat cylinder.
    CylinderSweep(CylinderSweepArgs),
    /// Energy, eigenvalue and modulus rates along curve shortening flow.
    Verify(VerifyArgs),
    /// Annulus-versus-cylinder spectral comparison with regime flag.
    Gap(GapArgs),
}

#[derive(Args, Debug, Clone)]
pub struct SharedArgs {
    /// Output directory [default: out]
    #[arg(long, value_name = "DIR")]
    pub out_dir: Option<String>,
    /// Write the CSV table [default: true]
    #[arg(long, value_name = "BOOL", num_args = 0..=1, default_missing_value = "true")]
    pub csv: Option<bool>,
    /// Write SVG figures [default: false]
    #[arg(long, value_name = "BOOL", num_args = 0..=1, default_missing_value = "true")]
    pub svg: Option<bool>,
    /// Flat `key = value` config file
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Seed of the eigensolver start block [default: 1592642302]
    #[arg(long, value_name = "U64")]
    pub seed: Option<u64>,
    /// Decimals in CSV numbers [default: 6]
    #[arg(long, value_name = "DIGITS")]
    pub precision: Option<usize>,
}

#[derive(Args, Debug)]
pub struct AnnulusTableArgs {
    /// Inner radius [default: 1]
    #[arg(long)]
    pub inner: Option<f64>,
    /// Comma-separated outer radii [default: 5,10,20,50,100,200,500,1000]
    #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
    pub outer: Option<RealList>,
    #[command(flatten)]
    pub shared: SharedArgs,
}

#[derive(Args, Debug)]
pub struct CylinderSweepArgs {
    /// Comma-separated amplitudes [default: 0.0001,0.0002,0.0005,0.001,0.002,0.005]
    #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
    pub epsilon: Option<RealList>,
    /// Cylinder height h [default: 1]
    #[arg(long)]
    pub height: Option<f64>,
    /// Interior axial nodes [default: 36]
    #[arg(long)]
    pub nx: Option<usize>,
    /// Angular nodes [default: 48]
    #[arg(long)]
    pub ntheta: Option<usize>,
    /// Angular frequency of the profile sin(pi x/h) cos(k theta) [default: 1]
    #[arg(long)]
    pub k: Option<u32>,
    /// Relative eigen-residual tolerance [default: 1e-10]
    #[arg(long)]
    pub tol: Option<f64>,
    /// Deficit quadrature [default: nodes]
    #[arg(long, value_enum)]
    pub deficit_rule: Option<DeficitChoice>,
    /// Linear solver inside inverse iteration [default: cholesky]
    #[arg(long, value_enum)]
    pub solver: Option<SolverChoice>,
    #[command(flatten)]
    pub shared: SharedArgs,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Initial inner radius [default: 1]
    #[arg(long)]
    pub inner: Option<f64>,
    /// Initial outer radius [default: 5]
    #[arg(long)]
    pub outer: Option<f64>,
    /// Last time sample [default: 0.4]
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Evenly spaced time samples on [0, t-end] [default: 5]
    #[arg(long)]
    pub samples: Option<usize>,
    /// Finite-difference step [default: 1e-5]
    #[arg(long)]
    pub fd_step: Option<f64>,
    /// Difference rule [default: central]
    #[arg(long, value_enum)]
    pub scheme: Option<SchemeChoice>,
    /// Boundary motion: flow speeds, frozen, or outer circle expanding at unit speed [default: csf]
    #[arg(long, value_enum)]
    pub velocity: Option<VelocityChoice>,
    #[command(flatten)]
    pub shared: SharedArgs,
}

#[derive(Args, Debug)]
pub struct GapArgs {
    /// Inner radius [default: 1]
    #[arg(long)]
    pub inner: Option<f64>,
    /// Comma-separated outer radii [default: 5,10,20,50,100,200,500,1000]
    #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
    pub outer: Option<RealList>,
    /// Deficit threshold of the small-deficit regime [default: 0.01]
    #[arg(long)]
    pub threshold: Option<f64>,
    #[command(flatten)]
    pub shared: SharedArgs,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::AnnulusTable(a) => commands::annulus_table(a),
        Command::CylinderSweep(a) => commands::cylinder_sweep(a),
        Command::Verify(a) => commands::verify(a),
        Command::Gap(a) => commands::gap(a),
    };
    match result {
        Ok(verdict) => ExitCode::from(verdict.exit_code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
