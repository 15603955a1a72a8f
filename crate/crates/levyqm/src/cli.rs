use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "levyqm",
    version,
    about = "Relativistic Lévy-process quantum mechanics and cubic-cutoff mass spectra"
)]
pub struct Cli {
    /// Directory receiving result files.
    #[arg(long, global = true, env = "LEVYQM_OUT_DIR", default_value = "levyqm-out")]
    pub out: PathBuf,

    /// Significant digits of numbers in CSV output.
    #[arg(long, global = true, default_value_t = 17, value_parser = clap::value_parser!(u16).range(1..=17))]
    pub precision: u16,

    /// File stem for the outputs; defaults to the subcommand name.
    #[arg(long, global = true)]
    pub stem: Option<String>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cutoff coefficients from masses, or masses from coefficients.
    #[command(subcommand)]
    Spectrum(SpectrumCommand),
    /// Transition density of the relativistic process by Fourier inversion.
    Density(DensityArgs),
    /// Bessel-kernel jump density in one or three dimensions.
    LevyMeasure(LevyMeasureArgs),
    /// Wave-packet evolution, optionally on one mass branch.
    Evolve(EvolveArgs),
    /// Propagator scan with certified poles and residues.
    Propagator(PropagatorArgs),
    /// Cutoff sweep of the scalarised one-loop self-energy.
    Loop(LoopArgs),
    /// Monte Carlo paths with a KS check against the density.
    Simulate(SimulateArgs),
    /// Recompute the cutoff coefficients of every preset and compare with the tabulated values.
    ReproduceTables,
}

#[derive(Debug, Subcommand)]
pub enum SpectrumCommand {
    /// Cutoff coefficients placing poles at three masses.
    Fit(FitArgs),
    /// Roots, masses and residues for given cutoff coefficients.
    Solve(SolveArgs),
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Three ascending masses in GeV.
    #[arg(
        long,
        value_delimiter = ',',
        num_args = 1,
        required_unless_present = "preset",
        conflicts_with = "preset"
    )]
    pub masses: Option<Vec<f64>>,
    #[arg(long)]
    pub preset: Option<String>,
    /// Base mass m in GeV; defaults to the lightest mass.
    #[arg(long)]
    pub base_mass: Option<f64>,
}

/// Cutoff coefficients, either explicit or from a preset.
#[derive(Debug, Args, Clone)]
pub struct CutoffArgs {
    /// λ1,λ2,λ3.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "preset")]
    pub lambdas: Option<Vec<f64>>,
    /// One of table1a, table1b, table2a, table2b, table3.
    #[arg(long)]
    pub preset: Option<String>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub cutoff: CutoffArgs,
    /// Base mass m in GeV (preset: its lightest mass).
    #[arg(long)]
    pub base_mass: Option<f64>,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    /// Particle mass in GeV; sets a = τ = 1/m.
    #[arg(long)]
    pub mass: f64,
    /// Time step in GeV⁻¹.
    #[arg(long)]
    pub dt: f64,
    /// Grid points (power of two); chosen automatically when omitted.
    #[arg(long, requires = "dx")]
    pub points: Option<usize>,
    /// Grid step in GeV⁻¹.
    #[arg(long, requires = "points")]
    pub dx: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Dim {
    #[value(name = "1")]
    One,
    #[value(name = "3")]
    Three,
}

#[derive(Debug, Args)]
pub struct LevyMeasureArgs {
    #[arg(long)]
    pub mass: f64,
    #[arg(long, value_enum, default_value = "1")]
    pub dim: Dim,
    #[arg(long, default_value_t = 400)]
    pub points: usize,
    /// Smallest distance, in units of a.
    #[arg(long, default_value_t = 1e-3)]
    pub r_min: f64,
    /// Largest distance, in units of a.
    #[arg(long, default_value_t = 30.0)]
    pub r_max: f64,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub x0: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub p0: f64,
    #[arg(long, default_value_t = 10.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0.05)]
    pub dt: f64,
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    #[arg(long, default_value_t = 4096)]
    pub points: usize,
    #[arg(long, default_value_t = 0.1)]
    pub dx: f64,
    /// Evolve on this mass branch (index of the positive roots, ascending).
    #[arg(long)]
    pub branch: Option<usize>,
    #[command(flatten)]
    pub cutoff: CutoffArgs,
    /// Write the full field every k steps.
    #[arg(long)]
    pub snapshot_every: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PropagatorArgs {
    /// Base mass m in GeV (preset: its lightest mass).
    #[arg(long)]
    pub mass: Option<f64>,
    #[command(flatten)]
    pub cutoff: CutoffArgs,
    /// Scan start in GeV²; defaults to m²/10.
    #[arg(long)]
    pub p2_min: Option<f64>,
    /// Scan end in GeV²; defaults to ten times the heaviest pole.
    #[arg(long)]
    pub p2_max: Option<f64>,
    #[arg(long, default_value_t = 2000)]
    pub points: usize,
    /// Pole width in GeV²; defaults to 1e-9 m².
    #[arg(long)]
    pub eps: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantChoice {
    Scalar,
    Mass,
    All,
}

#[derive(Debug, Args)]
pub struct LoopArgs {
    #[arg(long)]
    pub mass: Option<f64>,
    #[command(flatten)]
    pub cutoff: CutoffArgs,
    /// External Euclidean momentum in GeV; defaults to m.
    #[arg(long)]
    pub pe: Option<f64>,
    #[arg(long, value_enum, default_value = "all")]
    pub variant: VariantChoice,
    /// Explicit ascending cutoffs in GeV.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["lambda_start", "octaves"])]
    pub cutoffs: Option<Vec<f64>>,
    /// First cutoff; defaults to 100 max(m, heaviest pole mass).
    #[arg(long)]
    pub lambda_start: Option<f64>,
    /// Number of doublings after the first cutoff.
    #[arg(long, default_value_t = 16)]
    pub octaves: usize,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
    /// Horizon T in GeV⁻¹.
    #[arg(long, default_value_t = 1.0)]
    pub horizon: f64,
    #[arg(long, default_value_t = 1)]
    pub steps: usize,
    #[arg(long, default_value_t = 100_000)]
    pub paths: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Also write every path.
    #[arg(long)]
    pub full_paths: bool,
}
