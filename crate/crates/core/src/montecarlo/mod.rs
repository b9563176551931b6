//! Seeded Monte Carlo oracle for the analytic results.
//!
//! Trial `i` draws from a ChaCha8 stream selected by `(seed, i)`, and trials are
//! grouped into fixed-size chunks whose statistics are merged in chunk order.
//! Results are therefore bit-identical for any number of worker threads.
//!
//! Euro claims about a game whose fixed amount is hidden are checked once per
//! candidate fixed amount: each candidate is simulated as its own literal game,
//! and the claim has to hold in all of them.

mod model;
mod stats;

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analytic::{analyze_scenario, AnalysisResult};
use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};
use crate::tables::DealEvent;
use crate::types::{AmountRef, Decision, Player, Scenario, Units};

use model::{euros_defined, Model, ResolvedPolicy};
use stats::Moments;

pub use model::MAX_REJECTIONS;

pub const DEFAULT_TRIALS: u64 = 1_000_000;
pub const DEFAULT_Z_THRESHOLD: f64 = 4.0;
const CHUNK: u64 = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measure {
    EuroReturn,
    /// Return divided by the trial's average fixed amount.
    SuccessFactor,
    /// Return divided by player A's fixed amount in the trial.
    FractionOfAFixed,
}

impl Measure {
    pub fn units(self) -> Units {
        match self {
            Measure::EuroReturn => Units::Euros,
            Measure::SuccessFactor => Units::SuccessFactor,
            Measure::FractionOfAFixed => Units::FractionOf(AmountRef::PlayerAFixedAmount),
        }
    }

    pub fn for_units(units: Units) -> Result<Measure> {
        match units {
            Units::Euros => Ok(Measure::EuroReturn),
            Units::SuccessFactor => Ok(Measure::SuccessFactor),
            Units::FractionOf(AmountRef::PlayerAFixedAmount) => Ok(Measure::FractionOfAFixed),
            Units::FractionOf(other) => Err(Error::InvalidParameter(format!(
                "no simulation measure for fractions of {}",
                other.as_str()
            ))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Measure::EuroReturn => "euro-return",
            Measure::SuccessFactor => "success-factor",
            Measure::FractionOfAFixed => "fraction-of-a-fixed",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Policy {
    AlwaysTrade,
    AlwaysKeep,
    /// The ladder solver's policy; needs a ladder scenario.
    EquilibriumLadder,
    /// Request exactly at the amounts mapped to `Trade`.
    Custom(BTreeMap<Rational, Decision>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub trials: u64,
    pub seed: u64,
    pub scenario: Scenario<Rational>,
    /// Whose return is measured.
    pub player: Player,
    pub policy_a: Policy,
    pub policy_b: Policy,
    /// Worker threads; `None` uses the global pool. Never affects results.
    pub workers: Option<usize>,
}

impl SimulationConfig {
    pub fn new(scenario: Scenario<Rational>, player: Player, trials: u64, seed: u64) -> Self {
        Self {
            trials,
            seed,
            scenario,
            player,
            policy_a: Policy::AlwaysTrade,
            policy_b: Policy::AlwaysTrade,
            workers: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationResult {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
    pub units: Units,
    pub analytic_target: Option<Rational>,
    pub z_score: Option<f64>,
    /// Fraction of trials in which the exchange took place.
    pub exchange_rate: f64,
}

impl SimulationResult {
    pub fn with_target(mut self, target: Rational) -> Self {
        self.z_score = (self.std_error > 0.0).then(|| (self.mean - target.approx()) / self.std_error);
        self.analytic_target = Some(target);
        self
    }

    /// Within `threshold` standard errors of the target; with zero spread the mean must match it.
    pub fn agrees(&self, threshold: f64) -> bool {
        match (&self.analytic_target, self.z_score) {
            (_, Some(z)) => z.abs() <= threshold,
            (Some(target), None) => {
                let t = target.approx();
                (self.mean - t).abs() <= 1e-9 * t.abs().max(1.0)
            }
            (None, None) => false,
        }
    }
}

struct Run<'a> {
    model: &'a Model,
    player: Player,
    measure: Measure,
    policy_a: ResolvedPolicy,
    policy_b: ResolvedPolicy,
    base_rng: ChaCha8Rng,
}

impl Run<'_> {
    fn rng_for(&self, trial: u64) -> ChaCha8Rng {
        let mut rng = self.base_rng.clone();
        rng.set_stream(trial);
        rng
    }

    fn trial(&self, trial: u64) -> Result<(DealEvent<f64>, f64, bool)> {
        let deal = self.model.sample(&mut self.rng_for(trial))?;
        let exchanged = self.policy_a.requests(deal.amount_a) && self.policy_b.requests(deal.amount_b);
        let ret = if exchanged { deal.return_for(self.player) } else { 0.0 };
        Ok((deal.clone(), self.model.measure(self.measure, &deal, ret), exchanged))
    }
}

fn with_workers<R: Send>(workers: Option<usize>, job: impl FnOnce() -> R + Send) -> Result<R> {
    match workers {
        None => Ok(job()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::InvalidParameter(format!("cannot start {n} workers: {e}")))?;
            Ok(pool.install(job))
        }
    }
}

fn chunk_bounds(trials: u64) -> Vec<(u64, u64)> {
    (0..trials.div_ceil(CHUNK))
        .map(|c| (c * CHUNK, ((c + 1) * CHUNK).min(trials)))
        .collect()
}

fn simulate_model(
    model: &Model,
    player: Player,
    measure: Measure,
    policies: (&Policy, &Policy),
    trials: u64,
    seed: u64,
    workers: Option<usize>,
) -> Result<SimulationResult> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    model.check_measure(measure)?;
    let run = Run {
        model,
        player,
        measure,
        policy_a: ResolvedPolicy::resolve(policies.0, model)?,
        policy_b: ResolvedPolicy::resolve(policies.1, model)?,
        base_rng: ChaCha8Rng::seed_from_u64(seed),
    };
    let chunks = chunk_bounds(trials);
    let partials: Vec<Result<Moments>> = with_workers(workers, || {
        chunks
            .par_iter()
            .map(|&(start, end)| {
                let mut m = Moments::default();
                for t in start..end {
                    let (_, value, exchanged) = run.trial(t)?;
                    m.push(value, exchanged);
                }
                Ok(m)
            })
            .collect()
    })?;
    let mut total = Moments::default();
    for part in partials {
        total = total.merge(part?);
    }
    Ok(SimulationResult {
        mean: total.mean,
        std_error: total.std_error(),
        trials,
        units: measure.units(),
        analytic_target: None,
        z_score: None,
        exchange_rate: total.exchanges as f64 / trials as f64,
    })
}

/// Draws the deal of trial `trial` exactly as [`run_simulation`] does.
pub fn sample_deal(
    scenario: &Scenario<Rational>,
    perspective: Player,
    seed: u64,
    trial: u64,
) -> Result<DealEvent<f64>> {
    let model = Model::from_scenario(scenario, perspective)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    model.sample(&mut rng)
}

pub fn run_simulation(cfg: &SimulationConfig, measure: Measure) -> Result<SimulationResult> {
    let model = Model::from_scenario(&cfg.scenario, cfg.player)?;
    if measure == Measure::EuroReturn && !euros_defined(&cfg.scenario, cfg.player) {
        return Err(Error::UnitUnavailable(format!(
            "player {} does not know the fixed amounts of {}, so a euro return is not defined",
            cfg.player, cfg.scenario
        )));
    }
    simulate_model(
        &model,
        cfg.player,
        measure,
        (&cfg.policy_a, &cfg.policy_b),
        cfg.trials,
        cfg.seed,
        cfg.workers,
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct EventFrequency {
    pub amount_a: f64,
    pub amount_b: f64,
    pub count: u64,
}

/// How often each deal was drawn, ordered by amounts.
pub fn event_frequencies(cfg: &SimulationConfig) -> Result<Vec<EventFrequency>> {
    let model = Model::from_scenario(&cfg.scenario, cfg.player)?;
    let base_rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let chunks = chunk_bounds(cfg.trials);
    let partials: Vec<Result<BTreeMap<(u64, u64), u64>>> = with_workers(cfg.workers, || {
        chunks
            .par_iter()
            .map(|&(start, end)| {
                let mut counts = BTreeMap::new();
                for t in start..end {
                    let mut rng = base_rng.clone();
                    rng.set_stream(t);
                    let deal = model.sample(&mut rng)?;
                    *counts
                        .entry((deal.amount_a.to_bits(), deal.amount_b.to_bits()))
                        .or_insert(0) += 1;
                }
                Ok(counts)
            })
            .collect()
    })?;
    let mut counts: BTreeMap<(u64, u64), u64> = BTreeMap::new();
    for part in partials {
        for (k, v) in part? {
            *counts.entry(k).or_insert(0) += v;
        }
    }
    let mut out: Vec<EventFrequency> = counts
        .into_iter()
        .map(|((a, b), count)| EventFrequency {
            amount_a: f64::from_bits(a),
            amount_b: f64::from_bits(b),
            count,
        })
        .collect();
    out.sort_by(|x, y| {
        x.amount_a
            .total_cmp(&y.amount_a)
            .then(x.amount_b.total_cmp(&y.amount_b))
    });
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub trials: u64,
    pub seed: u64,
    pub threshold: f64,
    pub workers: Option<usize>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            trials: DEFAULT_TRIALS,
            seed: 0,
            threshold: DEFAULT_Z_THRESHOLD,
            workers: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub label: String,
    pub result: SimulationResult,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verification {
    pub claim: AnalysisResult<Rational>,
    pub threshold: f64,
    pub experiments: Vec<Experiment>,
    pub passed: bool,
}

/// Checks the correct analysis of `cfg.scenario` for `cfg.player` against simulation.
pub fn verify(cfg: &SimulationConfig, threshold: f64) -> Result<Verification> {
    let claim = analyze_scenario(&cfg.scenario, cfg.player)?;
    verify_claim(
        &claim,
        VerifyOptions {
            trials: cfg.trials,
            seed: cfg.seed,
            threshold,
            workers: cfg.workers,
        },
    )
}

fn own_amount(scenario: &Scenario<Rational>, player: Player) -> Option<Rational> {
    match scenario {
        Scenario::TwoFixedOpened {
            revealed_holder,
            revealed,
        } if *revealed_holder == player => Some(*revealed),
        Scenario::TwoFixedBothOpened { amount_a, amount_b } => {
            Some(if player == Player::A { *amount_a } else { *amount_b })
        }
        _ => None,
    }
}

/// The literal games a claim has to hold in, with labels.
fn experiments_for(claim: &AnalysisResult<Rational>) -> Result<Vec<(String, Model)>> {
    let scenario = &claim.scenario;
    if let Scenario::BoundedLadder { .. } = scenario {
        return Err(Error::InvalidParameter(
            "a return conditional on acceptance has no unconditional simulation counterpart".into(),
        ));
    }
    if claim.ev.units != Units::Euros || euros_defined(scenario, claim.player) {
        return Ok(vec![(
            scenario.to_string(),
            Model::from_scenario(scenario, claim.player)?,
        )]);
    }
    // Euro claim with hidden fixed amounts: one experiment per candidate game.
    match scenario {
        Scenario::OneFixedOpenedB { amount_b } | Scenario::OneFixedBothOpened { amount_b, .. } => Ok([
            amount_b * Rational::from_integer(2),
            amount_b / Rational::from_integer(2),
        ]
        .into_iter()
        .map(|fixed| (format!("A fixed at {fixed}"), Model::OneFixed { fixed: fixed.approx() }))
        .collect()),
        Scenario::TwoFixedOpened { revealed, .. } | Scenario::TwoFixedBothOpened { amount_a: revealed, .. } => {
            let reference = own_amount(scenario, claim.player).unwrap_or(*revealed);
            Ok([reference, reference / Rational::from_integer(2)]
                .into_iter()
                .map(|small| {
                    (
                        format!("fixed amounts {small} and {}", small * Rational::from_integer(2)),
                        Model::TwoFixedPair { small: small.approx() },
                    )
                })
                .collect())
        }
        _ => Err(Error::UnitUnavailable(format!(
            "{scenario} has no known fixed amount to express euros in"
        ))),
    }
}

/// Simulates every literal game the claim refers to and compares in the claim's units.
pub fn verify_claim(claim: &AnalysisResult<Rational>, opts: VerifyOptions) -> Result<Verification> {
    let measure = Measure::for_units(claim.ev.units)?;
    let always = Policy::AlwaysTrade;
    let experiments = experiments_for(claim)?
        .into_iter()
        .enumerate()
        .map(|(i, (label, model))| {
            let seed = opts.seed.wrapping_add(i as u64);
            let result = simulate_model(
                &model,
                claim.player,
                measure,
                (&always, &always),
                opts.trials,
                seed,
                opts.workers,
            )?
            .with_target(claim.ev.value);
            let passed = result.agrees(opts.threshold);
            Ok(Experiment { label, result, passed })
        })
        .collect::<Result<Vec<_>>>()?;
    let passed = !experiments.is_empty() && experiments.iter().all(|e| e.passed);
    Ok(Verification {
        claim: claim.clone(),
        threshold: opts.threshold,
        experiments,
        passed,
    })
}

/// Per-trial zero-sum check: both players' returns cancel, and are zero without an exchange.
pub fn zero_sum_holds(deal: &DealEvent<f64>, exchanged: bool) -> bool {
    let (a, b) = if exchanged {
        (deal.return_for(Player::A), deal.return_for(Player::B))
    } else {
        (0.0, 0.0)
    };
    (a + b).is_zero()
}
