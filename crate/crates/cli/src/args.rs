use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use linewalker::tabu::AspirationRadius;
use linewalker::{Algorithm, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "linewalker", version, about = "One-dimensional surrogate search and its benchmark suite")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one algorithm on one function or external oracle.
    Run(RunArgs),
    /// Run every function x budget x algorithm and write summary tables.
    Suite(SuiteArgs),
    /// Answer evaluation requests for a benchmark function on stdin/stdout.
    Serve(ServeArgs),
    /// List the benchmark functions.
    List,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgoArg {
    Full,
    Pure,
    Hunter,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Full => Algorithm::Full,
            AlgoArg::Pure => Algorithm::Pure,
            AlgoArg::Hunter => Algorithm::Hunter,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RadiusArg {
    /// Each candidate's own long-term neighbourhood.
    Long,
    /// The fixed short-term distance.
    Short,
}

/// Knobs shared by `run` and `suite`.
#[derive(Debug, Clone, Args)]
pub struct Tuning {
    /// Grid points (default: 5000, or the function's own override).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.01)]
    pub mu: f64,
    /// Fit-change tolerance that stops the extrema hunter.
    #[arg(long, default_value_t = 0.001)]
    pub emin: f64,
    /// Around-the-bend band, as a fraction of the fit range.
    #[arg(long, default_value_t = 0.01)]
    pub theta: f64,
    /// Evaluations per iteration.
    #[arg(long, default_value_t = 1)]
    pub per_iteration: usize,
    /// Neighbour radius used by the first aspiration rule.
    #[arg(long, value_enum, default_value_t = RadiusArg::Long)]
    pub aspiration_radius: RadiusArg,
}

impl Tuning {
    pub fn config(&self, n_points: usize, budget: usize) -> RunConfig {
        let mut c = RunConfig {
            e_max_total: budget,
            e_max_itr: self.per_iteration,
            n_points,
            alpha: self.alpha,
            mu: self.mu,
            e_min: self.emin,
            theta: self.theta,
            ..RunConfig::default()
        };
        c.tabu.aspiration_radius = match self.aspiration_radius {
            RadiusArg::Long => AspirationRadius::LongTerm,
            RadiusArg::Short => AspirationRadius::ShortTerm,
        };
        c
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long, value_enum, default_value_t = AlgoArg::Full)]
    pub algo: AlgoArg,
    /// Benchmark function name.
    #[arg(long = "fn", value_name = "NAME", conflicts_with = "oracle", required_unless_present = "oracle")]
    pub function: Option<String>,
    /// Shell command of an external evaluator.
    #[arg(long, value_name = "CMD", requires_all = ["from", "to"])]
    pub oracle: Option<String>,
    /// Dimension of the oracle's input points.
    #[arg(long, value_name = "D")]
    pub dim: Option<usize>,
    /// Segment start, comma separated.
    #[arg(long, value_name = "CSV", value_delimiter = ',', allow_hyphen_values = true)]
    pub from: Option<Vec<f64>>,
    /// Segment end, comma separated.
    #[arg(long, value_name = "CSV", value_delimiter = ',', allow_hyphen_values = true)]
    pub to: Option<Vec<f64>>,
    #[arg(long, default_value_t = 50)]
    pub budget: usize,
    #[command(flatten)]
    pub tuning: Tuning,
    /// Also write the fit of every iteration.
    #[arg(long)]
    pub snapshots: bool,
    #[arg(long, default_value = "linewalker-out")]
    pub out: PathBuf,
    /// Run twice and fail unless both runs produce identical artifacts.
    #[arg(long)]
    pub seedless: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SuiteArgs {
    /// Restrict to these functions.
    #[arg(long, value_delimiter = ',')]
    pub only: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',', default_values_t = [20usize, 30, 40, 50])]
    pub budgets: Vec<usize>,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [AlgoArg::Full, AlgoArg::Pure, AlgoArg::Hunter])]
    pub algos: Vec<AlgoArg>,
    #[command(flatten)]
    pub tuning: Tuning,
    #[arg(long, default_value = "linewalker-suite")]
    pub out: PathBuf,
    /// Run twice and fail unless both runs produce identical artifacts.
    #[arg(long)]
    pub seedless: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ServeArgs {
    #[arg(long = "fn", value_name = "NAME")]
    pub function: String,
}
