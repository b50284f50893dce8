//! Flag definitions for the `covsel` binary.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "covsel",
    version,
    about = "Sparse inverse covariance selection with known-zero constraints"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random instance into a directory.
    Generate(GenerateArgs),
    /// Solve an instance directory produced by `generate`.
    Solve(SolveArgs),
    /// Time both solvers over a grid of generated instances.
    Benchmark(BenchmarkArgs),
    /// Run the sparsity-recovery experiment and emit pattern bitmaps.
    Recover(RecoverArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodFlag {
    /// Adaptive spectral projected gradient.
    Aspg,
    /// Adaptive Nesterov smoothing.
    Ans,
    /// Run both on the same instance.
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyFlag {
    /// Bernoulli off-diagonal support with dominant diagonal.
    Density,
    /// Near-unit diagonal with a few ±1 off-diagonal spikes.
    Spike,
}

/// Solver flags shared by `solve`, `benchmark`, and `recover`.
#[derive(Debug, Clone, Args)]
pub struct SolverFlags {
    /// Inner solver.
    #[arg(long, value_enum, default_value_t = MethodFlag::Aspg)]
    pub method: MethodFlag,
    /// Duality-gap tolerance for each inner solve.
    #[arg(long, default_value_t = 0.1)]
    pub eps_o: f64,
    /// Tolerance on the largest constrained entry.
    #[arg(long, default_value_t = 1e-4)]
    pub eps_c: f64,
    /// Penalty escalation ratio between outer stages.
    #[arg(long, default_value_t = 2.0)]
    pub r_rho: f64,
    /// Initial penalty level on the constrained entries.
    #[arg(long, default_value_t = 0.5)]
    pub rho0: f64,
    /// Spectral-cap escalation ratio (ASPG).
    #[arg(long, default_value_t = 10.0)]
    pub r_beta: f64,
    /// Initial spectral cap.
    #[arg(long, default_value_t = 1.0)]
    pub beta0: f64,
    /// Outer stage cap.
    #[arg(long, default_value_t = 30)]
    pub max_outer: usize,
    /// Inner iteration cap per stage (the evaluation cap is twice this).
    #[arg(long, default_value_t = 50_000)]
    pub max_iter: usize,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Dimension.
    #[arg(long)]
    pub n: usize,
    /// Off-diagonal fill probability (density family).
    #[arg(long, default_value_t = 0.5)]
    pub density: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Noise scale on the inverted truth.
    #[arg(long, default_value_t = 0.15)]
    pub tau: f64,
    /// Lower bound enforced on the smallest eigenvalue of Sigma.
    #[arg(long, default_value_t = 1e-4)]
    pub vartheta_gen: f64,
    /// Minimum |i-j| for constrained pairs.
    #[arg(long, default_value_t = 2)]
    pub bandwidth: usize,
    #[arg(long, value_enum, default_value_t = FamilyFlag::Density)]
    pub family: FamilyFlag,
    /// Output directory (created if missing).
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Directory holding sigma.mtx and omega.pairs.
    #[arg(long)]
    pub input: PathBuf,
    /// Output directory (created if missing).
    #[arg(long)]
    pub out: PathBuf,
    /// Uniform penalty weight outside the constrained set.
    #[arg(long, default_value_t = 0.5)]
    pub rho_off: f64,
    /// Embed per-iteration traces in result.json.
    #[arg(long)]
    pub trace: bool,
    #[command(flatten)]
    pub flags: SolverFlags,
}

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    /// Dimensions, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "30,60")]
    pub n: Vec<usize>,
    /// Densities, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0.5")]
    pub density: Vec<f64>,
    /// Base seed; row k uses seed + k.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.15)]
    pub tau: f64,
    #[arg(long, default_value_t = 1e-4)]
    pub vartheta_gen: f64,
    #[arg(long, default_value_t = 2)]
    pub bandwidth: usize,
    /// Uniform penalty weight outside the constrained set.
    #[arg(long, default_value_t = 0.5)]
    pub rho_off: f64,
    /// Output directory (created if missing).
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub flags: SolverFlags,
}

#[derive(Debug, Args)]
pub struct RecoverArgs {
    /// Dimension of the spike-family instance.
    #[arg(long, default_value_t = 30)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.15)]
    pub tau: f64,
    #[arg(long, default_value_t = 1e-4)]
    pub vartheta_gen: f64,
    /// Minimum |i-j| for constrained pairs.
    #[arg(long, default_value_t = 5)]
    pub bandwidth: usize,
    /// Uniform penalty weight outside the constrained set.
    #[arg(long, default_value_t = 0.1)]
    pub rho_off: f64,
    /// Output directory (created if missing).
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub flags: SolverFlags,
}
