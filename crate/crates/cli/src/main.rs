//! `matroid-mcmc`: batch sampling, reliability estimation, exact diagnostics
//! and the scaling benchmark.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid input, 3 instance too
//! large for an exhaustive routine.

mod commands;
mod input;

use clap::{Args, Parser, Subcommand, ValueEnum};
use matroid_mcmc::ConnectivityBackend;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "matroid-mcmc", version, about = "Samplers for weighted matroids, connected spanning subgraphs and random cluster models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Draw independent samples, one sorted index array per output line.
    Sample(SampleArgs),
    /// Estimate all-terminal reliability of a graph file.
    EstimateReliability(EstimateArgs),
    /// Exhaustive distributions and kernels for small instances (JSON on stdout).
    Exact(ExactArgs),
    /// Per-step cost of the connected-spanning sampler on synthetic graphs (CSV).
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
enum Model {
    /// Weighted independent sets, `P(A) ∝ prod(λ_A)`.
    Independent,
    /// Connected spanning subgraphs of a graph file; prints surviving edges.
    ConnectedSpanning,
    /// Random cluster model `P(A) ∝ q^{-rk(A)} prod(λ_A)`.
    RandomCluster,
}

/// Where the matroid comes from.
#[derive(Args, Debug, Clone, serde::Serialize)]
struct Source {
    /// Graph file: header `n m`, then `u v p` per edge.
    #[arg(long, conflicts_with = "matroid")]
    graph: Option<PathBuf>,
    /// Matroid description (JSON tagged by "variant").
    #[arg(long)]
    matroid: Option<PathBuf>,
    /// Field file (one value per line) or a single constant.
    #[arg(long)]
    lambda: Option<String>,
}

#[derive(Args, Debug, serde::Serialize)]
struct SampleArgs {
    #[arg(long, value_enum)]
    model: Model,
    #[command(flatten)]
    source: Source,
    /// Random cluster parameter in [0, 1].
    #[arg(long)]
    q: Option<f64>,
    /// Target TV distance of each sample from the model.
    #[arg(long, default_value_t = 0.05)]
    eps: f64,
    #[arg(long, default_value_t = 1)]
    num_samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 4.0)]
    mix_constant: f64,
    /// Transitions per sample, overriding the mixing schedule.
    #[arg(long)]
    steps: Option<u64>,
    /// NDJSON output (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run manifest (JSON).
    #[arg(long)]
    stats: Option<PathBuf>,
    /// Worker threads; output does not depend on it.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, default_value = "hdt")]
    backend: ConnectivityBackend,
}

#[derive(Args, Debug, serde::Serialize)]
struct EstimateArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Target relative error of the estimate.
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Constant in the per-edge sample count.
    #[arg(long, default_value_t = 8.0)]
    c0: f64,
    /// TV target of each chain (default eps / (4 m)).
    #[arg(long)]
    chain_eps: Option<f64>,
    #[arg(long, default_value_t = 4.0)]
    mix_constant: f64,
    #[arg(long, default_value = "hdt")]
    backend: ConnectivityBackend,
    #[arg(long)]
    jobs: Option<usize>,
    /// JSON output (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ExactWhat {
    Mu,
    Pi,
    Rc,
    Reliability,
    Kernel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum KernelChain {
    Polarized,
    RandomCluster,
}

#[derive(Args, Debug)]
struct ExactArgs {
    #[arg(value_enum)]
    what: ExactWhat,
    /// How a graph file is read (see `sample --model`).
    #[arg(long, value_enum, default_value = "independent")]
    model: Model,
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    q: Option<f64>,
    /// Walk whose kernel `exact kernel` builds.
    #[arg(long, value_enum, default_value = "polarized")]
    chain: KernelChain,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "path,grid,random-regular")]
    families: Vec<matroid_mcmc::scaling::Family>,
    #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000")]
    sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "hdt,naive")]
    backends: Vec<ConnectivityBackend>,
    /// Timed transitions per row.
    #[arg(long, default_value_t = 2000)]
    steps: u64,
    /// Untimed transitions before timing starts, so that the dynamic
    /// connectivity structure is past its initial rebalancing.
    #[arg(long, default_value_t = 10_000)]
    warmup: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV output (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sample(a) => commands::sample(a),
        Command::EstimateReliability(a) => commands::estimate(a),
        Command::Exact(a) => commands::exact(a),
        Command::Bench(a) => commands::bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
