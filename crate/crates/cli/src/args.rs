//! Command-line grammar.

use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use parrondo_core::{MapKind, Pattern};

#[derive(Debug, Parser)]
#[command(name = "parrondo", version, about = "Parrondo's games under random, periodic and chaotic switching")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte Carlo capital trajectory for one policy.
    Simulate(SimulateArgs),
    /// Monte Carlo trajectories for the fair-comparison policy set.
    Compare(CompareArgs),
    /// Gain over a gamma × x0 grid.
    SweepGx(SweepGxArgs),
    /// Gain over an a × b grid for Henon or Lozi switching.
    SweepAb(SweepAbArgs),
    /// Long-run orbit samples against the map coefficient.
    Bifurcation(BifurcationArgs),
    /// Distribution of orbit values over [0, 1].
    Histogram(OrbitArgs),
    /// Consecutive (x_n, x_{n+1}) pairs.
    Phase(PhaseArgs),
    /// Proportion of Game A against gamma.
    Proportion(ProportionArgs),
    /// Exact long-run rate of winning and residue distribution.
    ExactRate(ExactRateArgs),
    /// Exact expected capital per round.
    ExactTraj(ExactTrajArgs),
    /// Period of a deterministic game sequence.
    DetectPeriod(DetectPeriodArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyKind {
    #[value(name = "allA", alias = "alla")]
    AllA,
    #[value(name = "allB", alias = "allb")]
    AllB,
    Random,
    Periodic,
    Chaotic,
}

fn parse_map(s: &str) -> Result<MapKind, String> {
    s.parse::<MapKind>().map_err(|e| e.to_string())
}

fn parse_unit(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is outside [0, 1]"))
    }
}

fn parse_pattern(s: &str) -> Result<Pattern, String> {
    s.parse::<Pattern>()
        .map_err(|_| format!("`{s}` is not a pattern over A/B (e.g. AABB) or [j,k]"))
}

fn parse_finite(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("`{s}` is not a finite number")),
    }
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Game bias epsilon.
    #[arg(long, default_value_t = parrondo_core::games::DEFAULT_EPSILON, value_parser = parse_finite, allow_hyphen_values = true)]
    pub epsilon: f64,
    /// Capital modulus M.
    #[arg(long, default_value_t = parrondo_core::games::DEFAULT_MODULUS)]
    pub modulus: u32,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads; affects wall time only.
    #[arg(long, env = "PARRONDO_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct PolicyArgs {
    #[arg(long, value_enum)]
    pub policy: Option<PolicyKind>,
    /// Named chaotic configuration (fig9-logistic, …, headline).
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long, value_parser = parse_map)]
    pub map: Option<MapKind>,
    #[arg(long, value_parser = parse_finite, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, value_parser = parse_finite, allow_hyphen_values = true)]
    pub b: Option<f64>,
    #[arg(long, value_parser = parse_finite, allow_hyphen_values = true)]
    pub x0: Option<f64>,
    #[arg(long, value_parser = parse_finite, allow_hyphen_values = true)]
    pub y0: Option<f64>,
    #[arg(long, value_parser = parse_unit)]
    pub gamma: Option<f64>,
    #[arg(long, value_parser = parse_pattern)]
    pub pattern: Option<Pattern>,
    /// Min-max normalize the driving orbit before thresholding.
    #[arg(long, action = ArgAction::Set)]
    pub normalize: Option<bool>,
}

/// An axis given either as from/to/step or as an explicit list.
macro_rules! axis_args {
    ($name:ident, $from:literal, $to:literal, $step:literal, $values:literal) => {
        #[derive(Debug, Clone, Default, Args)]
        pub struct $name {
            #[arg(id = $from, long = $from, value_parser = parse_finite, allow_hyphen_values = true)]
            pub from: Option<f64>,
            #[arg(id = $to, long = $to, value_parser = parse_finite, allow_hyphen_values = true)]
            pub to: Option<f64>,
            #[arg(id = $step, long = $step, value_parser = parse_finite)]
            pub step: Option<f64>,
            #[arg(id = $values, long = $values, value_delimiter = ',', value_parser = parse_finite, allow_hyphen_values = true,
                  conflicts_with_all = [$from, $to, $step])]
            pub values: Option<Vec<f64>>,
        }
    };
}

axis_args!(GammaAxisArgs, "gamma-from", "gamma-to", "gamma-step", "gamma-values");
axis_args!(X0AxisArgs, "x0-from", "x0-to", "x0-step", "x0-values");
axis_args!(AAxisArgs, "a-from", "a-to", "a-step", "a-values");
axis_args!(BAxisArgs, "b-from", "b-to", "b-step", "b-values");

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub policy: PolicyArgs,
    #[arg(long, default_value_t = parrondo_core::presets::GAMES)]
    pub games: usize,
    #[arg(long, default_value_t = parrondo_core::presets::COMPARE_TRIALS)]
    pub trials: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = parrondo_core::presets::GAMES)]
    pub games: usize,
    #[arg(long, default_value_t = parrondo_core::presets::COMPARE_TRIALS)]
    pub trials: usize,
    /// Also run Game A alone and Game B alone.
    #[arg(long, default_value_t = true, action = ArgAction::Set)]
    pub include_single: bool,
    /// Directory receiving `<label>.csv` files and `summary.csv`.
    #[arg(long, default_value = "compare_out")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct SweepGxArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_parser = parse_map, default_value = "logistic")]
    pub map: MapKind,
    #[arg(long, value_parser = parse_finite, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, value_parser = parse_finite, allow_hyphen_values = true)]
    pub b: Option<f64>,
    #[arg(long, default_value_t = 0.0, value_parser = parse_finite, allow_hyphen_values = true)]
    pub y0: f64,
    #[arg(long, default_value_t = true, action = ArgAction::Set)]
    pub normalize: bool,
    #[command(flatten)]
    pub gamma_axis: GammaAxisArgs,
    #[command(flatten)]
    pub x0_axis: X0AxisArgs,
    #[arg(long, default_value_t = parrondo_core::presets::GAMES)]
    pub games: usize,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Every other grid point and 1,000 trials.
    #[arg(long)]
    pub coarse: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepAbArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_parser = parse_map, default_value = "henon")]
    pub map: MapKind,
    #[command(flatten)]
    pub a_axis: AAxisArgs,
    #[command(flatten)]
    pub b_axis: BAxisArgs,
    #[arg(long, default_value_t = parrondo_core::presets::AB_GAMMA, value_parser = parse_unit)]
    pub gamma: f64,
    #[arg(long, default_value_t = 0.0, value_parser = parse_finite, allow_hyphen_values = true)]
    pub x0: f64,
    #[arg(long, default_value_t = 0.0, value_parser = parse_finite, allow_hyphen_values = true)]
    pub y0: f64,
    #[arg(long, default_value_t = true, action = ArgAction::Set)]
    pub normalize: bool,
    #[arg(long, default_value_t = parrondo_core::presets::GAMES)]
    pub games: usize,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub coarse: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BifurcationArgs {
    #[arg(long, value_parser = parse_map, default_value = "logistic")]
    pub map: MapKind,
    #[command(flatten)]
    pub a_axis: AAxisArgs,
    #[arg(long, default_value_t = 0.0, value_parser = parse_finite, allow_hyphen_values = true)]
    pub b: f64,
    #[arg(long, value_parser = parse_finite, allow_hyphen_values = true)]
    pub x0: Option<f64>,
    #[arg(long, default_value_t = parrondo_core::presets::BIFURCATION_SAMPLES)]
    pub samples: usize,
    #[arg(long, default_value_t = parrondo_core::chaos::DEFAULT_SCAN_TRANSIENT)]
    pub transient: usize,
    #[arg(long, env = "PARRONDO_THREADS")]
    pub threads: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct OrbitArgs {
    #[arg(long, value_parser = parse_map, default_value = "logistic")]
    pub map: MapKind,
    #[arg(long, value_parser = parse_finite, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, default_value_t = 0.0, value_parser = parse_finite, allow_hyphen_values = true)]
    pub b: f64,
    #[arg(long, default_value_t = 0.1, value_parser = parse_finite, allow_hyphen_values = true)]
    pub x0: f64,
    #[arg(long, default_value_t = 0.0, value_parser = parse_finite, allow_hyphen_values = true)]
    pub y0: f64,
    #[arg(long, default_value_t = 50_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub transient: usize,
    #[arg(long, default_value_t = 50)]
    pub bins: usize,
    #[arg(long, default_value_t = false, action = ArgAction::Set)]
    pub normalize: bool,
    #[arg(long, env = "PARRONDO_THREADS")]
    pub threads: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct PhaseArgs {
    #[arg(long, value_parser = parse_map, default_value = "logistic")]
    pub map: MapKind,
    #[arg(long, value_parser = parse_finite, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, default_value_t = 0.0, value_parser = parse_finite, allow_hyphen_values = true)]
    pub b: f64,
    #[arg(long, default_value_t = 0.1, value_parser = parse_finite, allow_hyphen_values = true)]
    pub x0: f64,
    #[arg(long, default_value_t = 0.0, value_parser = parse_finite, allow_hyphen_values = true)]
    pub y0: f64,
    #[arg(long, default_value_t = 5_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub transient: usize,
    #[arg(long, default_value_t = false, action = ArgAction::Set)]
    pub normalize: bool,
    /// Use a seeded uniform random sequence instead of a map.
    #[arg(long, default_value_t = false, action = ArgAction::Set)]
    pub uniform: bool,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, env = "PARRONDO_THREADS")]
    pub threads: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ProportionArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub gamma_axis: GammaAxisArgs,
    /// Rounds per measurement; long horizons give the settled proportion.
    #[arg(long, default_value_t = 10_000)]
    pub games: usize,
    /// Trials for the random-switching reference curve.
    #[arg(long, default_value_t = parrondo_core::presets::GRID_TRIALS)]
    pub trials: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ExactRateArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub policy: PolicyArgs,
    /// Rounds discarded before measuring a periodic pattern.
    #[arg(long, default_value_t = parrondo_core::oracle::DEFAULT_PERIODIC_BURN_IN)]
    pub burn_in: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ExactTrajArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub policy: PolicyArgs,
    #[arg(long, default_value_t = parrondo_core::presets::GAMES)]
    pub games: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct DetectPeriodArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub policy: PolicyArgs,
    #[arg(long, default_value_t = 300)]
    pub games: usize,
    #[arg(long, default_value_t = parrondo_core::switching::DEFAULT_PERIOD_TRANSIENT)]
    pub transient: usize,
    #[arg(long, default_value_t = parrondo_core::switching::DEFAULT_MAX_PERIOD)]
    pub max_period: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
