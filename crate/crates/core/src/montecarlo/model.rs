//! Literal samplers for each game variation.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ladder::{solve_ladder, LadderSpec};
use crate::scalar::{Rational, Scalar};
use crate::tables::{self, DealEvent};
use crate::types::{Decision, MarginalInfo, Player, Scenario};

use super::{Measure, Policy};

pub const MAX_REJECTIONS: u32 = 1000;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Model {
    /// Two fixed amounts `small` and `2·small`, assigned by a fair coin.
    TwoFixedPair { small: f64 },
    /// The holder shows `revealed`; the game is (revealed, 2·revealed) or (revealed/2, revealed).
    TwoFixedRevealed { holder: Player, revealed: f64 },
    /// A holds `fixed`; B gets double on Heads, half on Tails.
    OneFixed { fixed: f64 },
    /// B shows `revealed_b`; the coin decides whether A's hidden fixed amount is half or double it.
    OneFixedRevealedB { revealed_b: f64 },
    /// Adjacent pair of a doubling ladder, assigned by a coin, re-drawn until the announcement holds.
    TwoFixedLadder { amounts: Vec<f64>, info: MarginalInfo },
    /// A's amount drawn from the list, B's by coin, re-drawn until the announcement holds.
    OneFixedList { amounts: Vec<f64>, info: MarginalInfo },
}

impl Model {
    /// Sampler for `scenario` as seen by `perspective` (matters only when both envelopes are opened).
    pub fn from_scenario(scenario: &Scenario<Rational>, perspective: Player) -> Result<Model> {
        scenario.validate()?;
        Ok(match scenario {
            Scenario::TwoFixedClosed => Model::TwoFixedPair { small: 1.0 },
            Scenario::OneFixedClosed => Model::OneFixed { fixed: 1.0 },
            Scenario::TwoFixedNClosed { n, base, marginal } => Model::TwoFixedLadder {
                amounts: tables::ladder_amounts(*n, base).iter().map(Scalar::approx).collect(),
                info: *marginal,
            },
            Scenario::BoundedLadder { min, levels, .. } => Model::TwoFixedLadder {
                amounts: tables::ladder_amounts(*levels, min)
                    .iter()
                    .map(Scalar::approx)
                    .collect(),
                info: MarginalInfo::NoInfo,
            },
            Scenario::OneFixedNClosed { amounts, marginal } => {
                let mut sorted = amounts.clone();
                sorted.sort();
                if marginal.excludes_b() && !tables::is_doubling_ladder(&sorted) {
                    return Err(Error::InvalidParameter(
                        "information about B's envelope needs amounts forming a doubling ladder".into(),
                    ));
                }
                Model::OneFixedList {
                    amounts: sorted.iter().map(Scalar::approx).collect(),
                    info: *marginal,
                }
            }
            Scenario::TwoFixedOpened {
                revealed_holder,
                revealed,
            } => Model::TwoFixedRevealed {
                holder: *revealed_holder,
                revealed: revealed.approx(),
            },
            Scenario::TwoFixedBothOpened { amount_a, amount_b } => {
                let own = if perspective == Player::A { amount_a } else { amount_b };
                Model::TwoFixedRevealed {
                    holder: perspective,
                    revealed: own.approx(),
                }
            }
            Scenario::OneFixedOpenedA { amount_a } => Model::OneFixed {
                fixed: amount_a.approx(),
            },
            Scenario::OneFixedOpenedB { amount_b } => Model::OneFixedRevealedB {
                revealed_b: amount_b.approx(),
            },
            Scenario::OneFixedBothOpened { amount_a, amount_b } => match perspective {
                Player::A => Model::OneFixed {
                    fixed: amount_a.approx(),
                },
                Player::B => Model::OneFixedRevealedB {
                    revealed_b: amount_b.approx(),
                },
            },
        })
    }

    pub fn check_measure(&self, measure: Measure) -> Result<()> {
        if measure == Measure::FractionOfAFixed && !self.has_a_fixed_reference() {
            return Err(Error::InvalidParameter(
                "fraction-of-a-fixed needs a game with a fixed reference amount".into(),
            ));
        }
        Ok(())
    }

    fn has_a_fixed_reference(&self) -> bool {
        matches!(
            self,
            Model::TwoFixedPair { .. }
                | Model::OneFixed { .. }
                | Model::OneFixedRevealedB { .. }
                | Model::OneFixedList { .. }
        )
    }

    fn fixed_reference(&self, deal: &DealEvent<f64>) -> f64 {
        match self {
            Model::TwoFixedPair { small } => *small,
            _ => deal.amount_a,
        }
    }

    pub fn ladder(&self) -> Option<&[f64]> {
        match self {
            Model::TwoFixedLadder { amounts, .. } => Some(amounts),
            _ => None,
        }
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Result<DealEvent<f64>> {
        let heads = |rng: &mut ChaCha8Rng| rng.random_bool(0.5);
        match self {
            Model::TwoFixedPair { small } => Ok(if heads(rng) {
                DealEvent::new(*small, 2.0 * small)
            } else {
                DealEvent::new(2.0 * small, *small)
            }),
            Model::TwoFixedRevealed { holder, revealed } => {
                let other = if heads(rng) { 2.0 * revealed } else { revealed / 2.0 };
                Ok(match holder {
                    Player::A => DealEvent::new(*revealed, other),
                    Player::B => DealEvent::new(other, *revealed),
                })
            }
            Model::OneFixed { fixed } => {
                let b = if heads(rng) { 2.0 * fixed } else { fixed / 2.0 };
                Ok(DealEvent::new(*fixed, b))
            }
            Model::OneFixedRevealedB { revealed_b } => {
                let a = if heads(rng) { revealed_b / 2.0 } else { 2.0 * revealed_b };
                Ok(DealEvent::new(a, *revealed_b))
            }
            Model::TwoFixedLadder { amounts, info } => rejection(amounts, *info, || {
                let i = rng.random_range(0..amounts.len() - 1);
                let (low, high) = (amounts[i], amounts[i + 1]);
                if heads(rng) {
                    DealEvent::new(low, high)
                } else {
                    DealEvent::new(high, low)
                }
            }),
            Model::OneFixedList { amounts, info } => rejection(amounts, *info, || {
                let a = amounts[rng.random_range(0..amounts.len())];
                let b = if heads(rng) { 2.0 * a } else { a / 2.0 };
                DealEvent::new(a, b)
            }),
        }
    }

    pub fn measure(&self, measure: Measure, deal: &DealEvent<f64>, ret: f64) -> f64 {
        match measure {
            Measure::EuroReturn => ret,
            Measure::SuccessFactor => ret / ((deal.amount_a + deal.amount_b) / 2.0),
            Measure::FractionOfAFixed => ret / self.fixed_reference(deal),
        }
    }
}

fn rejection(amounts: &[f64], info: MarginalInfo, mut draw: impl FnMut() -> DealEvent<f64>) -> Result<DealEvent<f64>> {
    let inner = if amounts.len() > 2 {
        &amounts[1..amounts.len() - 1]
    } else {
        &[][..]
    };
    for _ in 0..MAX_REJECTIONS {
        let deal = draw();
        let a_ok = !info.excludes_a() || inner.contains(&deal.amount_a);
        let b_ok = !info.excludes_b() || inner.contains(&deal.amount_b);
        if a_ok && b_ok {
            return Ok(deal);
        }
    }
    Err(Error::RejectionLimit {
        attempts: MAX_REJECTIONS,
    })
}

/// Exchange request rule resolved against a concrete sampler.
#[derive(Debug, Clone)]
pub(crate) enum ResolvedPolicy {
    Always(bool),
    Table(Vec<(f64, bool)>),
}

impl ResolvedPolicy {
    pub fn resolve(policy: &Policy, model: &Model) -> Result<Self> {
        Ok(match policy {
            Policy::AlwaysTrade => ResolvedPolicy::Always(true),
            Policy::AlwaysKeep => ResolvedPolicy::Always(false),
            Policy::EquilibriumLadder => {
                let amounts = model.ladder().ok_or_else(|| {
                    Error::InvalidParameter("the equilibrium ladder policy needs a ladder scenario".into())
                })?;
                // The solver only looks at level indices.
                let spec = LadderSpec::new(Rational::from_integer(1), amounts.len())?;
                let (solved, _) = solve_ladder(&spec);
                ResolvedPolicy::Table(
                    amounts
                        .iter()
                        .enumerate()
                        .map(|(k, &a)| (a, solved.requests(k)))
                        .collect(),
                )
            }
            Policy::Custom(map) => ResolvedPolicy::Table(
                map.iter()
                    .map(|(amount, decision)| (amount.approx(), *decision == Decision::Trade))
                    .collect(),
            ),
        })
    }

    pub fn requests(&self, own: f64) -> bool {
        match self {
            ResolvedPolicy::Always(r) => *r,
            ResolvedPolicy::Table(rows) => rows.iter().any(|&(a, r)| a == own && r),
        }
    }
}

/// Whether every fixed amount of the game is known to `perspective`, which a euro return needs.
pub(crate) fn euros_defined(scenario: &Scenario<Rational>, perspective: Player) -> bool {
    match scenario {
        Scenario::TwoFixedNClosed { .. }
        | Scenario::OneFixedNClosed { .. }
        | Scenario::OneFixedOpenedA { .. }
        | Scenario::BoundedLadder { .. } => true,
        Scenario::OneFixedBothOpened { .. } => perspective == Player::A,
        _ => false,
    }
}
