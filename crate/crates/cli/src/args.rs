use clap::{Args, Parser, Subcommand, ValueEnum};
use envlab::{parse_rational, MarginalInfo, Player, Rational};

#[derive(Debug, Parser)]
#[command(
    name = "envlab",
    version,
    about = "Expected-return analysis and simulation of two-envelope exchange games"
)]
pub struct Cli {
    /// Output format (defaults to csv for `table`, json otherwise).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Simulation seed.
    #[arg(long, global = true, env = "ENVLAB_SEED")]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    #[value(alias = "markdown")]
    Md,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Correct expected return and decision for a variation.
    Analyze(AnalyzeArgs),
    /// Enumerate the deal table of an N-envelope variation.
    Table(TableArgs),
    /// Monte Carlo estimate, optionally checked against the analytic value.
    Simulate(SimulateArgs),
    /// Solve the bounded ladder by backward induction.
    Ladder(LadderArgs),
    /// Regenerate the summary of every variation.
    Summary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    TwoFixedClosed,
    TwoFixedNClosed,
    TwoFixedOpened,
    TwoFixedBothOpened,
    OneFixedClosed,
    OneFixedNClosed,
    OneFixedOpenedA,
    OneFixedOpenedB,
    OneFixedBothOpened,
    BoundedLadder,
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn player(s: &str) -> Result<Player, String> {
    s.parse().map_err(|e: envlab::Error| e.to_string())
}

fn marginal(s: &str) -> Result<MarginalInfo, String> {
    s.parse().map_err(|e: envlab::Error| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct ScenarioArgs {
    #[arg(long, value_enum)]
    pub variant: Variant,
    /// Revealed amount (A's for one-fixed-opened-a, B's for one-fixed-opened-b).
    #[arg(long, value_parser = rational)]
    pub revealed: Option<Rational>,
    /// Whose envelope is opened in two-fixed-opened.
    #[arg(long, value_parser = player, default_value = "A")]
    pub holder: Player,
    #[arg(long, value_parser = rational)]
    pub amount_a: Option<Rational>,
    #[arg(long, value_parser = rational)]
    pub amount_b: Option<Rational>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_parser = rational)]
    pub base: Option<Rational>,
    /// Comma-separated envelope amounts.
    #[arg(long, value_delimiter = ',', value_parser = rational)]
    pub amounts: Option<Vec<Rational>>,
    #[arg(long, value_parser = marginal, default_value = "none")]
    pub marginal_info: MarginalInfo,
    #[arg(long, value_parser = rational)]
    pub min: Option<Rational>,
    #[arg(long)]
    pub levels: Option<usize>,
    /// Amount seen by `--player` on the ladder.
    #[arg(long, value_parser = rational)]
    pub observed: Option<Rational>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    /// Analyze one player only.
    #[arg(long, value_parser = player)]
    pub player: Option<Player>,
    /// Append the flagged fallacious calculations.
    #[arg(long)]
    pub show_fallacies: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    TwoFixed,
    OneFixed,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_parser = rational)]
    pub base: Option<Rational>,
    #[arg(long, value_delimiter = ',', value_parser = rational)]
    pub amounts: Option<Vec<Rational>>,
    #[arg(long, value_parser = marginal, default_value = "none")]
    pub marginal_info: MarginalInfo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureArg {
    EuroReturn,
    SuccessFactor,
    FractionOfAFixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    AlwaysTrade,
    AlwaysKeep,
    EquilibriumLadder,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    /// Player whose return is measured.
    #[arg(long, value_parser = player, default_value = "A")]
    pub player: Player,
    #[arg(long, default_value_t = envlab::montecarlo::DEFAULT_TRIALS)]
    pub trials: u64,
    /// Defaults to the units of the analytic result.
    #[arg(long, value_enum)]
    pub measure: Option<MeasureArg>,
    #[arg(long, value_enum, default_value = "always-trade")]
    pub policy_a: PolicyArg,
    #[arg(long, value_enum, default_value = "always-trade")]
    pub policy_b: PolicyArg,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Compare against the analytic value and set the exit code.
    #[arg(long)]
    pub verify: bool,
    /// Verify a fallacy formula (e.g. 2.4.4) instead of the correct analysis.
    #[arg(long, requires = "verify")]
    pub claim: Option<String>,
    #[arg(long, default_value_t = envlab::montecarlo::DEFAULT_Z_THRESHOLD)]
    pub threshold: f64,
}

#[derive(Debug, Args)]
pub struct LadderArgs {
    #[arg(long, value_parser = rational)]
    pub min: Rational,
    #[arg(long)]
    pub levels: usize,
    #[arg(long, value_parser = rational)]
    pub observed: Option<Rational>,
    #[arg(long, value_parser = player, default_value = "B")]
    pub player: Player,
}
