use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use blowup_core::System;

#[derive(Debug, Parser)]
#[command(
    name = "blowup-lab",
    version,
    about = "Evaluate and verify explicit finite-time blow-up solutions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Field values over a grid, as CSV.
    Eval(EvalArgs),
    /// Residual sweep; exit 1 when the max relative residual exceeds --tol.
    Verify(VerifyArgs),
    /// Order of the FD residuals over a list of steps.
    Convergence(ConvergenceArgs),
    /// RK4 integration of the reduced ODEs against their closed forms.
    OdeCheck(OdeArgs),
    /// Diagnostic sampled geometrically toward blow-up, with a power-law fit.
    BlowupProfile(ProfileArgs),
    /// Audit of the small-data assumptions at t = 0.
    Assumptions(AssumptionArgs),
    /// Execute a configuration written by --dump-config.
    Run(RunArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, value_parser = parse_system)]
    pub system: System,
    /// JSON parameter file; the reference parameters are used when absent.
    #[arg(long)]
    pub params: Option<PathBuf>,
    /// Phase-field closure: allen-cahn, cahn-hilliard or transport-only.
    #[arg(long)]
    pub variant: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print the resolved configuration and exit.
    #[arg(long)]
    pub dump_config: bool,
}

#[derive(Debug, Args)]
pub struct Sampling {
    /// Spatial axes `lo:hi:n[,lo:hi:n…]`; a single axis is used for every
    /// dimension.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Comma-separated times; default is the standard admissible set.
    #[arg(long, allow_hyphen_values = true)]
    pub times: Option<String>,
    /// Negative control: flipped-exponent, slow-wave or flipped-amplitude-sign.
    #[arg(long)]
    pub perturb: Option<String>,
    /// Oldroyd equation set: transformed or original.
    #[arg(long)]
    pub equations: Option<String>,
}

#[derive(Debug, Args)]
pub struct Stencil {
    #[arg(long, default_value_t = 1e-3)]
    pub h: f64,
    /// Temporal step; defaults to --h.
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long, default_value_t = 2)]
    pub order: u8,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub sampling: Sampling,
    /// Oldroyd: evaluate past the blow-up time.
    #[arg(long)]
    pub continuation: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub sampling: Sampling,
    #[command(flatten)]
    pub stencil: Stencil,
    /// analytic or fd.
    #[arg(long, default_value = "analytic")]
    pub mode: String,
    /// Default 1e-8 analytic, 1e-3 fd.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub continuation: bool,
}

#[derive(Debug, Args)]
pub struct ConvergenceArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub sampling: Sampling,
    #[command(flatten)]
    pub stencil: Stencil,
    #[arg(long, default_value = "4e-3,2e-3,1e-3")]
    pub h_list: String,
    /// Allowed deviation of every slope from --order; default 0.1 (0.2 at order 4).
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct OdeArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 1e-4)]
    pub dt: f64,
    /// Default 0.9·t*, or 1 without blow-up.
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long, default_value_t = 1e-7)]
    pub tol: f64,
    /// Also write the trajectory CSV here.
    #[arg(long)]
    pub trajectory: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub common: Common,
    /// Comma-separated coordinates; default (1,1) for oldroyd, the origin otherwise.
    #[arg(long, allow_hyphen_values = true)]
    pub point: Option<String>,
    #[arg(long, default_value_t = 0.5)]
    pub ratio: f64,
    #[arg(long, default_value_t = 12)]
    pub count: usize,
    /// velocity-norm, deformation-ratio or pressure-magnitude.
    #[arg(long, default_value = "velocity-norm")]
    pub diagnostic: String,
    /// Fit JSON destination; stdout when absent.
    #[arg(long)]
    pub fit_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AssumptionArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value = "1,2,4,8")]
    pub ladder: String,
    #[arg(long, default_value_t = 17)]
    pub density: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub threshold: f64,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides the configured output path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub dump_config: bool,
}

fn parse_system(s: &str) -> Result<System, String> {
    s.parse().map_err(|e: blowup_core::Error| e.to_string())
}
