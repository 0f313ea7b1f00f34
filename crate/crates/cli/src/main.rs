//! `svp`: confidence radii, variance-penalized selection on loss matrices,
//! coverage checks and the synthetic experiments.
//!
//! Exit codes: 0 on success, 1 for unreadable or malformed input, 2 for
//! usage and parameter errors.

mod commands;

use std::fmt;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use svp_core::experiments::DEFAULT_SEED;

#[derive(Parser)]
#[command(name = "svp", version, about = "Empirical Bernstein bounds and sample variance penalization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a confidence radius
    Bound(BoundArgs),
    /// Select a hypothesis from a CSV loss matrix
    Select(SelectArgs),
    /// Monte Carlo coverage check of the confidence bounds
    Coverage(CoverageArgs),
    /// Run a synthetic experiment and write per-size records as CSV
    #[command(subcommand)]
    Experiment(ExperimentCommand),
    /// Run the sample compression scheme on synthetic labels
    CompressDemo(CompressArgs),
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// K hypotheses with losses a_k ± b_k
    Toy(ToyArgs),
    /// Constant 1/2 against Bernoulli(1/2 + ε)
    TwoHypothesis(TwoHypothesisArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum KindArg {
    Hoeffding,
    Bennett,
    EmpiricalBernstein,
    StdevUpper,
    StdevLower,
    UniformEb,
    FiniteClassHoeffding,
    FiniteClassEb,
}

#[derive(Args)]
pub struct BoundArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub delta: f64,
    /// Sample variance V_n (empirical Bernstein kinds)
    #[arg(long)]
    pub sample_variance: Option<f64>,
    /// True variance (bennett)
    #[arg(long)]
    pub variance: Option<f64>,
    /// Class size |F| (finite-class and uniform kinds)
    #[arg(long)]
    pub cardinality: Option<u64>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args)]
pub struct SelectArgs {
    /// Loss matrix CSV with header h0,h1,...; `-` reads standard input
    #[arg(long)]
    pub input: String,
    #[arg(long, default_value_t = 0.0)]
    pub lambda: f64,
    /// Confidence for the radius reported on the chosen column
    #[arg(long, default_value_t = 0.05)]
    pub delta: f64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args)]
pub struct SeedArgs {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Draw the seed from process entropy instead (printed to stderr)
    #[arg(long, conflicts_with = "seed")]
    pub entropy: bool,
    /// Worker threads; results do not depend on this
    #[arg(long)]
    pub threads: Option<usize>,
    /// Output file; standard output if omitted
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Args)]
pub struct CoverageArgs {
    /// bernoulli:P, uniform, beta:A,B or toy:A,B
    #[arg(long)]
    pub dist: String,
    /// Bound to check, or `all`
    #[arg(long, default_value = "all")]
    pub kind: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub delta: f64,
    #[arg(long, default_value_t = 20_000)]
    pub trials: usize,
    #[command(flatten)]
    pub seed: SeedArgs,
}

#[derive(Args)]
pub struct ToyArgs {
    /// Spread: means in [B, 1-B], deviations in [0, B]
    #[arg(long = "B", default_value_t = 0.25)]
    pub spread: f64,
    /// Number of hypotheses
    #[arg(long = "K", default_value_t = 500)]
    pub hypotheses: usize,
    /// Penalty weights; ERM (λ = 0) is always included
    #[arg(long, default_values_t = [2.5])]
    pub lambda: Vec<f64>,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    /// Use 10000 trials
    #[arg(long, conflicts_with = "trials")]
    pub full: bool,
    /// start:stop:step or a comma-separated list
    #[arg(long, default_value = "10:500:10")]
    pub sizes: String,
    #[command(flatten)]
    pub seed: SeedArgs,
}

#[derive(Args)]
pub struct TwoHypothesisArgs {
    /// Gap ε, or `inverse-sqrt` for ε(n) = 1/√(8n)
    #[arg(long, default_value = "inverse-sqrt")]
    pub epsilon: String,
    #[arg(long, default_value_t = 2.5)]
    pub lambda: f64,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long, default_value = "128,512,2048")]
    pub sizes: String,
    #[command(flatten)]
    pub seed: SeedArgs,
}

#[derive(Args)]
pub struct CompressArgs {
    #[arg(long, default_value_t = 20)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    /// Maximum number of subsets to enumerate
    #[arg(long, default_value_t = svp_core::compression::DEFAULT_SUBSET_CAP)]
    pub cap: u128,
    /// Label distribution as value:prob pairs
    #[arg(long, default_value = "0.1:0.5,0.4:0.3,0.9:0.2")]
    pub labels: String,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, conflicts_with = "seed")]
    pub entropy: bool,
}

#[derive(Debug)]
pub enum CliError {
    /// Bad parameters: exit 2.
    Usage(String),
    /// Unreadable or malformed input, failed output: exit 1.
    Input(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Input(m) => f.write_str(m),
        }
    }
}

impl From<svp_core::Error> for CliError {
    fn from(e: svp_core::Error) -> Self {
        use svp_core::Error::*;
        match e {
            MalformedMatrix(_) | MatrixEntryOutOfRange { .. } => CliError::Input(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bound(a) => commands::bound(&a),
        Command::Select(a) => commands::select(&a),
        Command::Coverage(a) => commands::coverage(&a),
        Command::Experiment(ExperimentCommand::Toy(a)) => commands::toy(&a),
        Command::Experiment(ExperimentCommand::TwoHypothesis(a)) => commands::two_hypothesis(&a),
        Command::CompressDemo(a) => commands::compress_demo(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                CliError::Input(_) => 1,
                CliError::Usage(_) => 2,
            })
        }
    }
}
