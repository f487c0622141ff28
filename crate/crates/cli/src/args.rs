use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "robin", version, about = "First Robin eigenvalues of balls, shells and annuli")]
pub struct Cli {
    /// Write the output to FILE instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve for the first eigenvalue of one problem.
    Eig(EigArgs),
    /// Tabulate a ball against a partner domain over an alpha grid.
    Sweep(SweepArgs),
    /// Locate the alpha where a volume-matched shell overtakes the ball.
    Crossing(CrossingArgs),
    /// Run a suite of property checks.
    Verify(VerifyArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Ball,
    Shell,
    AnnulusNr,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Partner {
    Shell,
    AnnulusNr,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Asymptotics,
    Bounds,
    Intersection,
}

/// Radii given directly or through the planar summary `(A0, L0)`.
#[derive(Args, Debug, Clone, Default)]
pub struct GeometryArgs {
    /// Ball radius.
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub r1: Option<f64>,
    #[arg(long)]
    pub r2: Option<f64>,
    /// Planar area A0 (two dimensions only).
    #[arg(long)]
    pub area: Option<f64>,
    /// Planar outer perimeter L0 (two dimensions only).
    #[arg(long)]
    pub outer_perimeter: Option<f64>,
}

#[derive(Args, Debug)]
pub struct EigArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(long, default_value_t = 2)]
    pub d: u32,
    #[command(flatten)]
    pub geometry: GeometryArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, value_enum, default_value = "shell")]
    pub partner: Partner,
    #[arg(long, default_value_t = 2)]
    pub d: u32,
    /// Ball radius (default 1, or the disk of area A0). The partner takes
    /// `--r1/--r2`, or the shell of equal volume when `--r2` is omitted.
    #[command(flatten)]
    pub geometry: GeometryArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha_start: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha_end: f64,
    #[arg(long)]
    pub steps: usize,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct CrossingArgs {
    #[arg(long, default_value_t = 2)]
    pub d: u32,
    #[arg(long, default_value_t = 1.0)]
    pub r_ball: f64,
    #[arg(long)]
    pub r1: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha_lo: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha_hi: f64,
    #[arg(long, default_value_t = 500)]
    pub samples: usize,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Disk radius for the intersection suite.
    #[arg(long, default_value_t = 1.0)]
    pub r3: f64,
}
