use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use splitreduc::split::TieBreak;
use splitreduc::{CostConfig, SplitLimits};

#[derive(Debug, Parser)]
#[command(
    name = "splitreduc",
    version,
    about = "Split and reduce high-order pseudo-Boolean objectives"
)]
pub struct Cli {
    /// Print machine-readable JSON on stdout.
    #[arg(long, global = true)]
    pub json: bool,

    /// Write outputs and a run manifest into this directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,

    /// Randomize ties between equally scored split variables with this seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Split a polynomial into device-sized leaf Hamiltonians.
    Split(SplitArgs),
    /// Predict the number of leaves without splitting.
    Estimate(EstimateArgs),
    /// Reduce to a target order with penalty auxiliaries.
    Quadratize(QuadratizeArgs),
    /// Generate or solve Ramsey-number Hamiltonians.
    #[command(subcommand)]
    Ramsey(RamseyCommand),
    /// Exact minimum of a polynomial.
    Solve(SolveArgs),
    /// Split counts and estimates for R(4,3) over the standard grid.
    #[command(name = "repro-table1")]
    ReproTable1(Table1Args),
    /// Re-run a recorded manifest and compare the outputs.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Args)]
pub struct DeviceArgs {
    /// Qubit capacity of the device.
    #[arg(long, default_value_t = 128)]
    pub qubits: usize,
    /// Highest native interaction order.
    #[arg(long, default_value_t = 2)]
    pub target_order: usize,
    /// Spend spare qubits on quadratization auxiliaries.
    #[arg(long)]
    pub allow_aux: bool,
}

impl DeviceArgs {
    pub fn config(&self, seed: Option<u64>) -> CostConfig {
        let tie = seed.map_or(TieBreak::Lowest, TieBreak::Seeded);
        CostConfig::new(self.qubits, self.target_order, self.allow_aux).with_tie_break(tie)
    }
}

#[derive(Debug, Clone, Args)]
pub struct LimitArgs {
    #[arg(long, default_value_t = 10_000_000)]
    pub max_leaves: usize,
    /// Defaults to the number of variables.
    #[arg(long)]
    pub max_depth: Option<usize>,
}

impl LimitArgs {
    pub fn limits(&self) -> SplitLimits {
        SplitLimits {
            max_leaves: self.max_leaves,
            max_depth: self.max_depth,
        }
    }
}

#[derive(Debug, Args)]
pub struct SplitArgs {
    /// Polynomial file (text grammar or JSON document).
    pub input: PathBuf,
    #[command(flatten)]
    pub device: DeviceArgs,
    #[command(flatten)]
    pub limits: LimitArgs,
    /// Only count leaves; do not emit them.
    #[arg(long)]
    pub summary_only: bool,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub device: DeviceArgs,
}

#[derive(Debug, Args)]
pub struct QuadratizeArgs {
    pub input: PathBuf,
    #[arg(long, default_value_t = 2)]
    pub target_order: usize,
    /// Penalty weight; defaults to 1 + sum of |coefficients|.
    #[arg(long)]
    pub lambda: Option<i64>,
    #[arg(long)]
    pub max_aux: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum RamseyCommand {
    /// Emit H(m, n, N).
    Gen { m: usize, n: usize, vertices: usize },
    /// Find the first N with a positive ground energy.
    Solve(RamseySolveArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exhaustive,
    Split,
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
    pub mode: Mode,
    /// Largest leaf handed to the exhaustive search in split mode.
    #[arg(long, default_value_t = 32)]
    pub leaf_var_cap: usize,
}

#[derive(Debug, Args)]
pub struct RamseySolveArgs {
    pub m: usize,
    pub n: usize,
    #[arg(long = "max-N", alias = "max-n")]
    pub max_vertices: usize,
    #[arg(long = "start-N", alias = "start-n")]
    pub start_vertices: Option<usize>,
    /// Record evidence for every N up to the maximum without stopping at
    /// the first positive minimum or naming the Ramsey number.
    #[arg(long)]
    pub report_only: bool,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub device: DeviceArgs,
    #[command(flatten)]
    pub limits: LimitArgs,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub device: DeviceArgs,
    #[command(flatten)]
    pub limits: LimitArgs,
    #[arg(long)]
    pub count_minima: bool,
    /// Stop at the first zero-energy assignment (nonnegative objectives).
    #[arg(long)]
    pub early_exit_zero: bool,
}

#[derive(Debug, Args)]
pub struct Table1Args {
    /// Vertex counts to run.
    #[arg(long = "vertices", value_delimiter = ',', default_values_t = [6, 7, 8, 9])]
    pub vertices: Vec<usize>,
    /// Qubit budgets to run.
    #[arg(long = "qubits", value_delimiter = ',', default_values_t = [128, 50, 30])]
    pub qubits: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
}
