//! Command-line surface. Every subcommand's arguments are serde-able so
//! the fully resolved set can be stored in a run manifest and replayed.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use gmn_core::game::SamplingMode;
use serde::{Deserialize, Serialize};

/// Default output directory when neither `--out` nor the environment
/// variable is set.
pub const DEFAULT_OUT_DIR: &str = "gmn-out";
pub const OUT_DIR_ENV: &str = "GMN_OUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "gmn", version, about = "Guess-my-number game: simulations, exact classical bounds and datasets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "subcommand", content = "args", rename_all = "snake_case")]
pub enum Command {
    /// Play seeded games and write transcripts plus a summary
    Simulate(SimulateArgs),
    /// Evaluate the best classical winning probability
    Exact(ExactArgs),
    /// Regenerate the detector-efficiency table and compare with reference values
    Table2(Table2Args),
    /// Exact limit curve plus Monte Carlo points over a grid of forced fractions
    Figure1(Figure1Args),
    /// Exhaustive search over deterministic classical strategies
    Oracle(OracleArgs),
    /// Census of integer-total apple assignments by combination
    Census(CensusArgs),
    /// Re-run the command recorded in a manifest
    #[serde(skip)]
    Replay(ReplayArgs),
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
pub struct OutArgs {
    /// Output directory [env: GMN_OUT_DIR; default: gmn-out]
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl OutArgs {
    pub fn resolve(&self) -> PathBuf {
        self.out
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
    }
}

#[derive(clap::ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    /// Four contestants, forced fraction 0.05, quantum team at sigma 0.47
    Headline,
}

#[derive(clap::ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct SimulateArgs {
    /// Named parameter set; explicit flags still take precedence
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Number of contestants (3 or 4) [default: 4]
    #[arg(long)]
    pub contestants: Option<usize>,
    /// Rounds per game
    #[arg(long, default_value_t = 1000)]
    pub rounds: usize,
    /// Minimum fraction of rounds that must be played [default: 0.05]
    #[arg(long)]
    pub forced_fraction: Option<f64>,
    /// classical, quantum, or custom:<path> to a strategy file [default: quantum]
    #[arg(long)]
    pub team: Option<String>,
    /// Per-detector efficiency of the quantum team [default: 0.47]
    #[arg(long)]
    pub sigma: Option<f64>,
    /// How the referee deals apples
    #[arg(long, default_value_t = SamplingMode::IntegerUniform)]
    pub mode: SamplingMode,
    /// Number of independent games
    #[arg(long, default_value_t = 1)]
    pub games: usize,
    /// Master seed; game g uses a seed derived from (seed, g)
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Transcript format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write only the summary, no per-game transcripts
    #[arg(long)]
    pub summary_only: bool,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct ExactArgs {
    #[arg(long, default_value_t = 4)]
    pub contestants: usize,
    #[arg(long, default_value_t = 0.05)]
    pub forced_fraction: f64,
    /// Convergence tolerance of the large-N limit
    #[arg(long, default_value_t = 1e-4)]
    pub tolerance: f64,
    /// Evaluate at this finite number of rounds instead of the limit
    #[arg(long)]
    pub rounds: Option<u64>,
    /// Give up after N = 2^max_exponent rounds
    #[arg(long, default_value_t = 22)]
    pub max_exponent: u32,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct Table2Args {
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct Figure1Args {
    #[arg(long, default_value_t = 3)]
    pub contestants: usize,
    /// Forced fractions: `start:stop:step` or a comma-separated list
    #[arg(long, default_value = "0:1:0.02")]
    pub grid: String,
    /// Monte Carlo games per grid point
    #[arg(long, default_value_t = 1000)]
    pub games: usize,
    /// Rounds per Monte Carlo game
    #[arg(long, default_value_t = 100)]
    pub rounds: usize,
    #[arg(long, default_value_t = SamplingMode::AllUniform)]
    pub mode: SamplingMode,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-4)]
    pub tolerance: f64,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct OracleArgs {
    #[arg(long, default_value_t = 3)]
    pub contestants: usize,
    /// Refuse searches larger than this many candidate strategies
    #[arg(long)]
    pub bound: Option<u128>,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct CensusArgs {
    #[arg(long, default_value_t = 4)]
    pub contestants: usize,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct ReplayArgs {
    /// Manifest written by an earlier run
    pub manifest: PathBuf,
    /// Compare every regenerated output with the recorded one and fail on
    /// any byte difference
    #[arg(long)]
    pub check: bool,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutArgs,
}

impl Command {
    pub fn seed(&self) -> Option<u64> {
        match self {
            Command::Simulate(a) => Some(a.seed),
            Command::Figure1(a) => Some(a.seed),
            _ => None,
        }
    }

    pub fn out_args_mut(&mut self) -> &mut OutArgs {
        match self {
            Command::Simulate(a) => &mut a.out,
            Command::Exact(a) => &mut a.out,
            Command::Table2(a) => &mut a.out,
            Command::Figure1(a) => &mut a.out,
            Command::Oracle(a) => &mut a.out,
            Command::Census(a) => &mut a.out,
            Command::Replay(a) => &mut a.out,
        }
    }
}
