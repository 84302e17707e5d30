use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tgiw::{FitConfig, Method, Mode, Solution, SubModel};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "tgiw", version, about = "Transmuted generalized inverse Weibull toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit one model to a dataset
    Fit(FitArgs),
    /// Fit several models and tabulate K-S, -2 loglik, AIC, AICC and LR tests
    Compare(CompareArgs),
    /// Draw a seeded sample by inverse transform
    Sample(SampleArgs),
    /// Tabulate pdf, cdf, survival and hazard on a grid
    Tabulate(TabulateArgs),
    /// Refit the embedded 50-item failure-time study and check the published values
    ReproducePaper(ReproduceArgs),
}

#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    /// `paper` for the embedded failure times, or a CSV path (`-` for stdin)
    #[arg(long, default_value = "paper")]
    pub data: String,

    /// Column name to read when the CSV has a header row
    #[arg(long)]
    pub column: Option<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MethodArg {
    Mle,
    Lse,
    Wlse,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Reduced,
    Full,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SolutionArg {
    /// Best interior root of the score equations
    Stationary,
    /// Best value over the closed parameter space, edges included
    Global,
}

#[derive(Debug, Clone, Args)]
pub struct OptimizerArgs {
    #[arg(long, value_enum, default_value = "reduced")]
    pub mode: ModeArg,

    #[arg(long, value_enum, default_value = "stationary")]
    pub solution: SolutionArg,

    /// Random restarts in addition to the deterministic starts
    #[arg(long, default_value_t = 10)]
    pub multistart: usize,

    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    /// Wald intervals are reported at confidence 1 - level
    #[arg(long, default_value_t = 0.05)]
    pub level: f64,

    /// Iteration cap for each simplex run
    #[arg(long, default_value_t = 20_000)]
    pub max_iterations: usize,
}

impl OptimizerArgs {
    pub fn config(&self, model: SubModel, method: MethodArg) -> Result<FitConfig, CliError> {
        let cfg = FitConfig {
            model,
            mode: match self.mode {
                ModeArg::Reduced => Mode::Reduced,
                ModeArg::Full => Mode::Full,
            },
            method: match method {
                MethodArg::Mle => Method::Mle,
                MethodArg::Lse => Method::Lse,
                MethodArg::Wlse => Method::Wlse,
            },
            solution: match self.solution {
                SolutionArg::Stationary => Solution::Stationary,
                SolutionArg::Global => Solution::Global,
            },
            multistart: self.multistart,
            seed: self.seed,
            level: self.level,
            max_iterations: self.max_iterations,
            ..FitConfig::new(model)
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Print the JSON report instead of the text summary
    #[arg(long)]
    pub json: bool,

    /// Write the output to a file instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn parse_model(tag: &str) -> Result<SubModel, String> {
    SubModel::parse(tag).ok_or_else(|| {
        let known: Vec<&str> = SubModel::ALL.iter().map(|m| m.name()).collect();
        format!("unknown model `{tag}` (expected one of {})", known.join(", "))
    })
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub data: DataArgs,

    #[arg(long, default_value = "tgiw", value_parser = parse_model)]
    pub model: SubModel,

    #[arg(long, value_enum, default_value = "mle")]
    pub method: MethodArg,

    #[command(flatten)]
    pub optimizer: OptimizerArgs,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub data: DataArgs,

    /// Comma-separated model list, in table order
    #[arg(long, value_delimiter = ',', default_value = "giw,tgiw", value_parser = parse_model)]
    pub models: Vec<SubModel>,

    /// Count every natural parameter (4 for TGIW, 3 for GIW) in AIC and AICC
    #[arg(long)]
    pub paper_k: bool,

    #[command(flatten)]
    pub optimizer: OptimizerArgs,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: f64,
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub params: ParamArgs,

    #[arg(short = 'n', long = "n")]
    pub n: usize,

    #[arg(long)]
    pub seed: u64,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct TabulateArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,

    #[arg(long, allow_hyphen_values = true)]
    pub min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub max: Option<f64>,
    #[arg(long, default_value_t = 101)]
    pub points: usize,

    /// Space grid points evenly in log x
    #[arg(long)]
    pub log: bool,

    /// Explicit comma-separated grid, instead of min/max/points
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with_all = ["min", "max", "log"])]
    pub x: Vec<f64>,

    /// Dataset whose empirical cdf is appended after the grid
    #[arg(long)]
    pub data: Option<String>,

    #[arg(long, requires = "data")]
    pub column: Option<String>,

    /// Fit this model to --data and tabulate the fitted distribution
    #[arg(long, value_parser = parse_model, requires = "data")]
    pub fit: Option<SubModel>,

    /// Print every value with full double precision
    #[arg(long)]
    pub full_precision: bool,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ReproduceArgs {
    #[arg(long, value_enum, default_value = "stationary")]
    pub solution: SolutionArg,

    #[arg(long, default_value_t = 10)]
    pub multistart: usize,

    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    #[command(flatten)]
    pub output: OutputArgs,
}
