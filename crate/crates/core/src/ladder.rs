//! Iterated elimination of exchange requests on a publicly known doubling ladder.
//!
//! The solver reasons on level indices only. Working down from the top level, a
//! holder requests an exchange when it could gain (the upper neighbor still
//! requests) or when it cannot lose (there is no lower neighbor).

use crate::analytic::AnalysisResult;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::types::{ExpectedReturn, Player, Scenario};

#[derive(Debug, Clone, PartialEq)]
pub struct LadderSpec<T> {
    min: T,
    levels: usize,
}

impl<T: Scalar> LadderSpec<T> {
    pub fn new(min: T, levels: usize) -> Result<Self> {
        if levels < 2 {
            return Err(Error::InvalidParameter(format!(
                "ladder needs at least 2 levels, got {levels}"
            )));
        }
        if !min.is_positive_amount() {
            return Err(Error::InvalidParameter(format!(
                "ladder minimum must be positive, got {min}"
            )));
        }
        Ok(Self { min, levels })
    }

    pub fn min(&self) -> &T {
        &self.min
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn top(&self) -> usize {
        self.levels - 1
    }

    pub fn amounts(&self) -> Vec<T> {
        crate::tables::ladder_amounts(self.levels, &self.min)
    }

    pub fn amount_at(&self, level: usize) -> T {
        (0..level).fold(self.min.clone(), |a, _| a.double())
    }

    pub fn level_of(&self, amount: &T) -> Option<usize> {
        self.amounts().iter().position(|a| a == amount)
    }

    fn require_level(&self, amount: &T) -> Result<usize> {
        self.level_of(amount)
            .ok_or_else(|| Error::InvalidParameter(format!("{amount} is not on the ladder")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LadderPolicy {
    request_at: Vec<bool>,
}

impl LadderPolicy {
    pub fn from_requests(request_at: Vec<bool>) -> Self {
        Self { request_at }
    }

    pub fn always(levels: usize, request: bool) -> Self {
        Self {
            request_at: vec![request; levels],
        }
    }

    pub fn requests(&self, level: usize) -> bool {
        self.request_at.get(level).copied().unwrap_or(false)
    }

    pub fn levels(&self) -> usize {
        self.request_at.len()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.request_at
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReasoningStep<T> {
    pub level: usize,
    pub amount: T,
    pub request: bool,
    pub justification: String,
}

/// One step per level, from the top level downward.
#[derive(Debug, Clone, PartialEq)]
pub struct ReasoningTrace<T> {
    pub steps: Vec<ReasoningStep<T>>,
}

pub fn solve_ladder<T: Scalar>(spec: &LadderSpec<T>) -> (LadderPolicy, ReasoningTrace<T>) {
    let mut request_at = vec![false; spec.levels];
    let mut steps = Vec::with_capacity(spec.levels);
    for level in (0..spec.levels).rev() {
        let amount = spec.amount_at(level);
        let upper = (level < spec.top()).then(|| level + 1);
        let lower = level.checked_sub(1);
        let can_gain = upper.is_some_and(|u| request_at[u]);
        let can_lose = lower.is_some();
        let request = can_gain || !can_lose;
        let justification = match (upper, lower) {
            (None, _) => format!(
                "{amount} is the largest amount: the partner can only hold {}, so an accepted exchange loses; do not request",
                amount.half()
            ),
            (Some(_), Some(_)) if !request => format!(
                "the holder of {} never requests, so an accepted exchange means the partner holds {}: nothing to gain; do not request",
                amount.double(),
                amount.half()
            ),
            (Some(_), None) => format!(
                "{amount} is the smallest amount: no exchange can lose, so request"
            ),
            (Some(_), Some(_)) => format!(
                "the holder of {} still requests, so an exchange may gain; request",
                amount.double()
            ),
        };
        request_at[level] = request;
        steps.push(ReasoningStep {
            level,
            amount,
            request,
            justification,
        });
    }
    (LadderPolicy { request_at }, ReasoningTrace { steps })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LadderOutcome<T> {
    pub exchanged: bool,
    pub return_a: T,
    pub return_b: T,
}

/// Plays one deal: the exchange happens only if both holders request it.
pub fn ladder_outcome<T: Scalar>(
    spec: &LadderSpec<T>,
    policy: &LadderPolicy,
    level_a: usize,
    level_b: usize,
) -> Result<LadderOutcome<T>> {
    if level_a >= spec.levels || level_b >= spec.levels || level_a.abs_diff(level_b) != 1 {
        return Err(Error::InvalidParameter(format!(
            "deal levels ({level_a}, {level_b}) must be adjacent levels of a {}-level ladder",
            spec.levels
        )));
    }
    let exchanged = policy.requests(level_a) && policy.requests(level_b);
    let (return_a, return_b) = if exchanged {
        let gain_a = spec.amount_at(level_b) - spec.amount_at(level_a);
        (gain_a.clone(), -gain_a)
    } else {
        (T::zero(), T::zero())
    };
    Ok(LadderOutcome {
        exchanged,
        return_a,
        return_b,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConditionalExchange<T> {
    /// A neighbor requests under the equilibrium policy; the return if the exchange goes through.
    Possible(ExpectedReturn<T>),
    /// No neighbor ever requests under the equilibrium policy. `if_forced` is the
    /// return if the exchange nevertheless took place.
    NeverAccepted { if_forced: ExpectedReturn<T> },
}

impl<T: Scalar> ConditionalExchange<T> {
    /// The return conditional on acceptance, regardless of whether acceptance can occur.
    pub fn value_if_accepted(&self) -> &ExpectedReturn<T> {
        match self {
            ConditionalExchange::Possible(ev) => ev,
            ConditionalExchange::NeverAccepted { if_forced } => if_forced,
        }
    }

    pub fn is_possible(&self) -> bool {
        matches!(self, ConditionalExchange::Possible(_))
    }
}

/// Return of requesting an exchange from `observed`, conditional on it being accepted.
///
/// Under equilibrium only the bottom holder requests, so the exchange can only be
/// accepted by a holder of the level just above it. Otherwise the partner that
/// could accept is the lower neighbor (an upper neighbor would lose), or the upper
/// one at the bottom of the ladder.
pub fn conditional_exchange_ev<T: Scalar>(
    spec: &LadderSpec<T>,
    observed: &T,
    _for_player: Player,
) -> Result<ConditionalExchange<T>> {
    let level = spec.require_level(observed)?;
    let (policy, _) = solve_ladder(spec);
    let neighbors = [level.checked_sub(1), (level < spec.top()).then(|| level + 1)];
    let accepting: Vec<usize> = neighbors
        .into_iter()
        .flatten()
        .filter(|&n| policy.requests(n))
        .collect();
    let return_with = |partner: usize| spec.amount_at(partner) - observed.clone();
    if !accepting.is_empty() {
        let total = accepting.iter().fold(T::zero(), |acc, &p| acc + return_with(p));
        let value = total / T::from_int(accepting.len() as i64);
        return Ok(ConditionalExchange::Possible(ExpectedReturn::euros(value)));
    }
    let partner = level.checked_sub(1).unwrap_or(level + 1);
    Ok(ConditionalExchange::NeverAccepted {
        if_forced: ExpectedReturn::euros(return_with(partner)),
    })
}

pub(crate) fn analyze_ladder<T: Scalar>(scenario: &Scenario<T>, player: Player) -> Result<AnalysisResult<T>> {
    let Scenario::BoundedLadder { min, levels, observed } = scenario else {
        return Err(Error::InvalidParameter(format!(
            "{} is not a ladder scenario",
            scenario.name()
        )));
    };
    let spec = LadderSpec::new(min.clone(), *levels)?;
    let Some((holder, amount)) = observed else {
        return Err(Error::InvalidParameter(
            "ladder analysis needs an observed amount".into(),
        ));
    };
    if *holder != player {
        return Err(Error::InvalidParameter(format!(
            "player {player} has not observed an amount; the observation belongs to {holder}"
        )));
    }
    let conditional = conditional_exchange_ev(&spec, amount, player)?;
    let explanation = if spec.level_of(amount) == Some(0) {
        "smallest amount: nothing to lose by requesting"
    } else {
        "an accepted exchange can only be with the lower amount: do not request"
    };
    Ok(AnalysisResult::new(
        scenario.clone(),
        player,
        conditional.value_if_accepted().clone(),
        "-",
        explanation,
    ))
}
