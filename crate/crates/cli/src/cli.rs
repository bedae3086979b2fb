use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use oscar_core::{ProxStepKind, SolverKind};

#[derive(Debug, Parser)]
#[command(
    name = "oscar",
    version,
    about = "OSCAR proximity operators, solvers and benchmarks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply a proximity operator to a vector file.
    Prox(ProxArgs),
    /// Solve one regularized least-squares problem from files or a generated instance.
    Solve(SolveArgs),
    /// Run the solver x prox grid over a range of seeds.
    Bench(BenchArgs),
    /// Time APO against GPO on vectors of length 100 * 2^k.
    ProxBench(ProxBenchArgs),
    /// Time all twelve variants on instances of growing length.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Args)]
pub struct PenaltyArgs {
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    pub lambda1: f64,
    #[arg(long, default_value_t = 0.001, allow_negative_numbers = true)]
    pub lambda2: f64,
}

#[derive(Debug, Clone, Args)]
pub struct IterationArgs {
    #[arg(long, default_value_t = 0.01)]
    pub tol: f64,
    #[arg(long, default_value_t = 500)]
    pub max_iter: usize,
    /// Penalty of ADMM/SBM and step parameter of PADMM (defaults: 1 and 1.02 ||A||).
    #[arg(long)]
    pub mu: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct ProxArgs {
    /// Input vector, one value per line.
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, short)]
    pub out: PathBuf,
    #[command(flatten)]
    pub penalty: PenaltyArgs,
    #[arg(long, default_value = "gpo")]
    pub prox: ProxStepKind,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    /// Observation vector; requires `--matrix`. Without both an instance is generated.
    #[arg(long, short = 'y', requires = "matrix")]
    pub observations: Option<PathBuf>,
    /// Sensing matrix as CSV.
    #[arg(long, short = 'a', requires = "observations")]
    pub matrix: Option<PathBuf>,
    /// Ground truth, enables MAE/MSE in the summary and the trace.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    /// Seed of the generated instance.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Length of the generated instance, with n / 2 measurements.
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value = "padmm")]
    pub solver: SolverKind,
    #[arg(long, default_value = "gpo")]
    pub prox: ProxStepKind,
    #[command(flatten)]
    pub penalty: PenaltyArgs,
    #[command(flatten)]
    pub iteration: IterationArgs,
    /// Where to write the estimate.
    #[arg(long, short)]
    pub out: PathBuf,
    /// Per-iterate trace CSV.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// First seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of consecutive seeds.
    #[arg(long, default_value_t = 10)]
    pub seeds: u64,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "fista,twist,sparsa,admm,sbm,padmm"
    )]
    pub solver: Vec<SolverKind>,
    #[arg(long, value_delimiter = ',', default_value = "gpo,apo")]
    pub prox: Vec<ProxStepKind>,
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    /// Number of measurements (default n / 2).
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 0.4)]
    pub sigma: f64,
    #[command(flatten)]
    pub penalty: PenaltyArgs,
    #[command(flatten)]
    pub iteration: IterationArgs,
    #[arg(long, short, default_value = "bench.csv")]
    pub out: PathBuf,
    /// Directory of per-run traces (default: `<out>_traces` next to the results file).
    #[arg(long)]
    pub trace_dir: Option<PathBuf>,
    #[arg(long)]
    pub no_traces: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ProxBenchArgs {
    #[arg(long, default_value_t = 1)]
    pub k_min: u32,
    #[arg(long, default_value_t = 10)]
    pub k_max: u32,
    /// Timed calls per operator and length (at least 5).
    #[arg(long, default_value_t = 5)]
    pub repeats: usize,
    /// Random inputs per length for the APO/GPO distance.
    #[arg(long, default_value_t = 5)]
    pub vectors: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, short, default_value = "prox_bench.csv")]
    pub out: PathBuf,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long = "n", value_delimiter = ',', default_value = "1000,2000,4000")]
    pub lengths: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Timed runs per variant; the median is reported.
    #[arg(long, default_value_t = 1)]
    pub repeats: usize,
    /// Largest allowed sensing matrix in bytes.
    #[arg(long, default_value_t = 1 << 30)]
    pub max_bytes: usize,
    #[command(flatten)]
    pub iteration: IterationArgs,
    #[arg(long, short, default_value = "sweep.csv")]
    pub out: PathBuf,
    #[arg(long)]
    pub json: bool,
}
