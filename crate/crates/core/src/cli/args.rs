use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use super::input::KRange;

const EXIT_CODES: &str = "\
Exit codes:
  0  success
  2  input error (unreadable or malformed data, invalid arguments)
  3  numerical domain error (the estimator is undefined for the data)
  4  sample fraction selection failed

Set EVTKIT_THREADS to fix the number of worker threads.";

#[derive(Debug, Parser)]
#[command(name = "evtkit", version, about = "Semi-parametric extreme value analysis", after_help = EXIT_CODES)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tail index estimates over a range of k
    Estimate(EstimateArgs),
    /// Location-invariant estimates from excesses over an empirical quantile
    Port(PortArgs),
    /// Double bootstrap choice of k
    BootstrapK(BootstrapArgs),
    /// Monte Carlo campaign on a synthetic model
    Simulate(SimulateArgs),
    /// Extremal index of a time-ordered series
    Ei(EiArgs),
    /// Distance of normalized maxima to their ultimate and penultimate laws
    Converge(ConvergeArgs),
    /// Gumbel's model-choice statistic
    ChooseModel(ChooseModelArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output format
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Data file, one value per line (`-` for stdin)
    pub input: PathBuf,
    /// hill, moment, mm, pme, mop, mvrb or gj; `pme:<p>` and `mop:<p>` also accepted
    #[arg(long, default_value = "hill")]
    pub method: String,
    /// Exponent for pme and mop
    #[arg(long)]
    pub p: Option<f64>,
    /// Second-order shape for gj (estimated from the data when absent)
    #[arg(long, allow_hyphen_values = true)]
    pub rho: Option<f64>,
    /// Levels as `a:b:step` or a single k (default 2:n/2:1)
    #[arg(long)]
    pub k: Option<KRange>,
    /// Add the reduced-bias Hill estimate as a companion column
    #[arg(long)]
    pub mvrb: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PortBaseArg {
    Hill,
    Moment,
    Mm,
}

#[derive(Debug, Args)]
pub struct PortArgs {
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "hill")]
    pub base: PortBaseArg,
    /// Quantile level of the random threshold, in [0, 1)
    #[arg(long, default_value_t = crate::port::DEFAULT_S)]
    pub s: f64,
    #[arg(long)]
    pub k: Option<KRange>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BootstrapEstimatorArg {
    Hill,
    Mop,
    Mvrb,
}

#[derive(Debug, Args)]
pub struct BootstrapArgs {
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "hill")]
    pub estimator: BootstrapEstimatorArg,
    /// Exponent for mop
    #[arg(long, default_value_t = 0.0)]
    pub p: f64,
    #[arg(long, default_value_t = crate::resampling::DEFAULT_REPLICATES)]
    pub replicates: usize,
    /// First sub-sample size (default n^0.955)
    #[arg(long)]
    pub n1: Option<usize>,
    /// Second sub-sample size (default n1^2/n)
    #[arg(long)]
    pub n2: Option<usize>,
    #[arg(long)]
    pub seed: u64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// `hall-welsh:xi,beta,rho[,C]`, `pareto:xi` or `frechet:alpha`
    #[arg(long)]
    pub model: String,
    /// Use the truncated second-order form for hall-welsh models
    #[arg(long)]
    pub truncated: bool,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 100)]
    pub replicates: usize,
    /// Comma-separated estimators, e.g. `hill,mvrb,mop:0.5`
    #[arg(long, default_value = "hill,mvrb")]
    pub methods: String,
    #[arg(long)]
    pub k: Option<KRange>,
    #[arg(long)]
    pub seed: u64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EiEstimatorArg {
    /// Blocks with an exceedance over exceedances
    Blocks,
    /// Logarithmic blocks estimator
    Log,
}

#[derive(Debug, Args)]
pub struct EiArgs {
    /// Time-ordered series, one value per line (omit with --armax)
    #[arg(required_unless_present = "armax")]
    pub input: Option<PathBuf>,
    /// Simulate a max-autoregressive series with this coefficient instead
    #[arg(long, requires_all = ["n", "seed"], conflicts_with = "input")]
    pub armax: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Block length (default floor(sqrt(n)))
    #[arg(long)]
    pub block_len: Option<usize>,
    /// Threshold; defaults to the empirical quantile at --quantile
    #[arg(long, allow_hyphen_values = true)]
    pub threshold: Option<f64>,
    #[arg(long, default_value_t = 0.995)]
    pub quantile: f64,
    #[arg(long, value_enum, default_value = "blocks")]
    pub estimator: EiEstimatorArg,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    /// normal, exponential, uniform or frechet:<alpha>
    #[arg(long)]
    pub model: String,
    /// Comma-separated sample sizes
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<u64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ChooseModelArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub common: Common,
}
