//! Closed-form expected returns of exchanging, one function per game variation.
//!
//! Every value is computed from the two equally likely events of the variation
//! rather than stated as a constant. The documented fallacious calculations live
//! here as well, but they are separate functions flagged with `is_fallacy` and
//! are never reached from [`analyze_scenario`].
//!
//! For opened envelopes in two-fixed-amount games each event's return is divided
//! by the average fixed amount of that event. Dividing by the total amount
//! instead would give the same zero; only the average-amount weighting is
//! implemented.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::types::{decide, AmountRef, Decision, ExpectedReturn, Player, Scenario, Units};
use crate::{ladder, tables};

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisResult<T> {
    pub scenario: Scenario<T>,
    pub player: Player,
    pub ev: ExpectedReturn<T>,
    pub decision: Decision,
    pub formula_id: &'static str,
    pub is_fallacy: bool,
    pub explanation: &'static str,
}

impl<T: Scalar> AnalysisResult<T> {
    pub(crate) fn new(
        scenario: Scenario<T>,
        player: Player,
        ev: ExpectedReturn<T>,
        formula_id: &'static str,
        explanation: &'static str,
    ) -> Self {
        let decision = decide(&ev);
        Self {
            scenario,
            player,
            ev,
            decision,
            formula_id,
            is_fallacy: false,
            explanation,
        }
    }

    fn fallacy(mut self) -> Self {
        self.is_fallacy = true;
        self
    }
}

/// Formula ids of the documented fallacies.
pub const FALLACY_FORMULAS: [&str; 5] = ["1.1.2", "1.3.3", "2.4.3", "2.4.4", "2.4.5"];

/// `(1/2)·x + (1/2)·y`: both events of every variation are equally likely.
fn even<T: Scalar>(x: T, y: T) -> T {
    x.half() + y.half()
}

fn require_positive<T: Scalar>(name: &str, value: &T) -> Result<()> {
    if value.is_positive_amount() {
        Ok(())
    } else {
        Err(Error::InvalidScenario(format!("{name} must be positive, got {value}")))
    }
}

fn sign_for<T: Scalar>(player: Player, value: T) -> T {
    match player {
        Player::A => value,
        Player::B => -value,
    }
}

/// Both amounts fixed, both envelopes closed. `X` is the smaller amount.
pub fn ev_two_fixed_closed<T: Scalar>(player: Player) -> AnalysisResult<T> {
    let x = T::one();
    // Holding X, exchanging gains X; holding 2X, exchanging loses X. Same for either player.
    let value = even(x.clone(), -x);
    AnalysisResult::new(
        Scenario::TwoFixedClosed,
        player,
        ExpectedReturn::fraction_of(value, AmountRef::PlayerAFixedAmount),
        "1.1.1",
        "X is the smaller fixed amount in both terms; gain X or lose X with probability 1/2",
    )
}

/// The classic miscalculation: own amount X is the larger one in one term and the smaller in the other.
pub fn fallacy_naive_quarter<T: Scalar>(player: Player) -> AnalysisResult<T> {
    let x = T::one();
    let value = even(x.clone(), -x.half());
    AnalysisResult::new(
        Scenario::TwoFixedClosed,
        player,
        ExpectedReturn::fraction_of(value, AmountRef::PlayerAFixedAmount),
        "1.1.2",
        "double property assigned to variable X: smaller amount in one term, larger in the other",
    )
    .fallacy()
}

/// One envelope opened in a two-fixed-amount game, evaluated as a success factor.
pub fn ev_two_fixed_opened<T: Scalar>(
    revealed: T,
    revealed_holder: Player,
    for_player: Player,
) -> Result<AnalysisResult<T>> {
    require_positive("revealed amount", &revealed)?;
    let value = success_factor_for_holder(&revealed);
    let (value, formula) = if for_player == revealed_holder {
        (value, "1.3.1")
    } else {
        (-value, "1.3.2")
    };
    Ok(AnalysisResult::new(
        Scenario::TwoFixedOpened {
            revealed_holder,
            revealed,
        },
        for_player,
        ExpectedReturn::success_factor(value),
        formula,
        "each candidate game's return is weighted by that game's average fixed amount",
    ))
}

/// Success factor of exchanging for the holder of `amount` when the two candidate
/// games are (amount, 2·amount) and (amount/2, amount).
fn success_factor_for_holder<T: Scalar>(amount: &T) -> T {
    let upper_pair_mean = (amount.clone() + amount.double()).half();
    let lower_pair_mean = (amount.half() + amount.clone()).half();
    let gain = amount.clone() / upper_pair_mean;
    let loss = -amount.half() / lower_pair_mean;
    even(gain, loss)
}

/// Holder of a revealed two-fixed amount treats it as the only fixed amount.
pub fn fallacy_opened_unweighted<T: Scalar>(revealed: T) -> Result<AnalysisResult<T>> {
    require_positive("revealed amount", &revealed)?;
    let value = even(revealed.clone(), -revealed.half());
    Ok(AnalysisResult::new(
        Scenario::TwoFixedOpened {
            revealed_holder: Player::A,
            revealed,
        },
        Player::A,
        ExpectedReturn::euros(value),
        "1.3.3",
        "treats the revealed amount as the only fixed amount in the game, mixing two different games unweighted",
    )
    .fallacy())
}

/// Player A's amount is the fixed one; B's is double or half by a fair coin.
pub fn ev_one_fixed_closed<T: Scalar>(for_player: Player) -> AnalysisResult<T> {
    let x = T::one();
    let value = sign_for(for_player, even(x.clone(), -x.half()));
    let formula = match for_player {
        Player::A => "2.1.1",
        Player::B => "2.1.2",
    };
    AnalysisResult::new(
        Scenario::OneFixedClosed,
        for_player,
        ExpectedReturn::fraction_of(value, AmountRef::PlayerAFixedAmount),
        formula,
        "the 1/2 weights are the coin probabilities and X is A's fixed amount in both terms",
    )
}

/// A's fixed amount is revealed; it is the same in both coin events so no weighting is needed.
pub fn ev_one_fixed_opened_a<T: Scalar>(amount_a: T, for_player: Player) -> Result<AnalysisResult<T>> {
    require_positive("amount A", &amount_a)?;
    let value = sign_for(for_player, even(amount_a.clone(), -amount_a.half()));
    let formula = match for_player {
        Player::A => "2.3.1",
        Player::B => "2.3.2",
    };
    Ok(AnalysisResult::new(
        Scenario::OneFixedOpenedA { amount_a },
        for_player,
        ExpectedReturn::euros(value),
        formula,
        "the fixed amount is known and identical in both coin events",
    ))
}

/// B's amount is revealed; each coin event is weighted by A's (hidden) fixed amount in that event.
pub fn ev_one_fixed_opened_b<T: Scalar>(amount_b: T, for_player: Player) -> Result<AnalysisResult<T>> {
    require_positive("amount B", &amount_b)?;
    // Tails: A fixed 2b, exchange loses b. Heads: A fixed b/2, exchange gains b/2.
    let tails_fixed = amount_b.double();
    let heads_fixed = amount_b.half();
    let tails = -amount_b.clone() / tails_fixed;
    let heads = amount_b.half() / heads_fixed;
    let value = sign_for(for_player, even(tails, heads));
    let formula = match for_player {
        Player::A => "2.4.1",
        Player::B => "2.4.2",
    };
    Ok(AnalysisResult::new(
        Scenario::OneFixedOpenedB { amount_b },
        for_player,
        ExpectedReturn::fraction_of(value, AmountRef::PlayerAFixedAmount),
        formula,
        "each coin event is weighted by A's fixed amount in that event; a euro value is not available",
    ))
}

/// Unweighted euro calculation over B's revealed amount; gives the opposite of the correct decisions.
pub fn fallacy_opened_b_unweighted<T: Scalar>(amount_b: T, for_player: Player) -> Result<AnalysisResult<T>> {
    require_positive("amount B", &amount_b)?;
    let value = sign_for(for_player, even(-amount_b.clone(), amount_b.half()));
    let formula = match for_player {
        Player::A => "2.4.3",
        Player::B => "2.4.4",
    };
    Ok(AnalysisResult::new(
        Scenario::OneFixedOpenedB { amount_b },
        for_player,
        ExpectedReturn::euros(value),
        formula,
        "fail to weigh their expected returns with the fixed amount, which differs between the two terms",
    )
    .fallacy())
}

/// Averages `X/4` over both candidate fixed amounts; the mirrored version gives B the negative.
pub fn fallacy_opened_b_quarter_mix<T: Scalar>(amount_b: T, for_player: Player) -> Result<AnalysisResult<T>> {
    require_positive("amount B", &amount_b)?;
    let quarter = T::from_int(4);
    let value = even(amount_b.double() / quarter.clone(), amount_b.half() / quarter);
    Ok(AnalysisResult::new(
        Scenario::OneFixedOpenedB { amount_b },
        for_player,
        ExpectedReturn::euros(sign_for(for_player, value)),
        "2.4.5",
        "counts events contradicted by the known content of B's envelope",
    )
    .fallacy())
}

/// Refuses a euro valuation when A's fixed amount is hidden from the player.
pub fn expected_euros<T: Scalar>(scenario: &Scenario<T>, for_player: Player) -> Result<ExpectedReturn<T>> {
    let result = analyze_scenario(scenario, for_player)?;
    if result.ev.units == Units::Euros {
        Ok(result.ev)
    } else {
        Err(Error::UnitUnavailable(format!(
            "{scenario} for player {for_player} is only defined in {}",
            result.ev.units
        )))
    }
}

/// Correct analysis for any scenario and player.
pub fn analyze_scenario<T: Scalar>(scenario: &Scenario<T>, for_player: Player) -> Result<AnalysisResult<T>> {
    scenario.validate()?;
    let result = match scenario {
        Scenario::TwoFixedClosed => ev_two_fixed_closed(for_player),
        Scenario::OneFixedClosed => ev_one_fixed_closed(for_player),
        Scenario::TwoFixedOpened {
            revealed_holder,
            revealed,
        } => ev_two_fixed_opened(revealed.clone(), *revealed_holder, for_player)?,
        Scenario::TwoFixedBothOpened { amount_a, amount_b } => {
            // Each player reasons from his own amount exactly as if only it were revealed.
            let own = match for_player {
                Player::A => amount_a,
                Player::B => amount_b,
            };
            let mut result = ev_two_fixed_opened(own.clone(), for_player, for_player)?;
            result.formula_id = match for_player {
                Player::A => "1.3.1",
                Player::B => "1.4.1",
            };
            result
        }
        Scenario::OneFixedOpenedA { amount_a } => ev_one_fixed_opened_a(amount_a.clone(), for_player)?,
        Scenario::OneFixedOpenedB { amount_b } => ev_one_fixed_opened_b(amount_b.clone(), for_player)?,
        Scenario::OneFixedBothOpened { amount_a, .. } => match for_player {
            Player::A => ev_one_fixed_opened_a(amount_a.clone(), Player::A)?,
            // B does not see A's fixed amount and must ignore his own.
            Player::B => ev_one_fixed_closed(Player::B),
        },
        Scenario::TwoFixedNClosed { .. } | Scenario::OneFixedNClosed { .. } => {
            tables::analyze_n_envelopes(scenario, for_player)?
        }
        Scenario::BoundedLadder { .. } => ladder::analyze_ladder(scenario, for_player)?,
    };
    Ok(AnalysisResult {
        scenario: scenario.clone(),
        ..result
    })
}

/// The documented fallacious calculations a player in `scenario` could fall into.
pub fn fallacies_for<T: Scalar>(scenario: &Scenario<T>, for_player: Player) -> Result<Vec<AnalysisResult<T>>> {
    scenario.validate()?;
    let rows = match scenario {
        Scenario::TwoFixedClosed | Scenario::TwoFixedNClosed { .. } => vec![fallacy_naive_quarter(for_player)],
        Scenario::TwoFixedOpened {
            revealed_holder,
            revealed,
        } if *revealed_holder == for_player => {
            vec![holder_fallacy(revealed.clone(), for_player)?]
        }
        Scenario::TwoFixedBothOpened { amount_a, amount_b } => {
            let own = match for_player {
                Player::A => amount_a,
                Player::B => amount_b,
            };
            vec![holder_fallacy(own.clone(), for_player)?]
        }
        Scenario::OneFixedOpenedB { amount_b } => vec![
            fallacy_opened_b_unweighted(amount_b.clone(), for_player)?,
            fallacy_opened_b_quarter_mix(amount_b.clone(), for_player)?,
        ],
        Scenario::OneFixedBothOpened { amount_b, .. } if for_player == Player::B => vec![
            fallacy_opened_b_unweighted(amount_b.clone(), Player::B)?,
            fallacy_opened_b_quarter_mix(amount_b.clone(), Player::B)?,
        ],
        _ => Vec::new(),
    };
    Ok(rows
        .into_iter()
        .map(|r| AnalysisResult {
            scenario: scenario.clone(),
            ..r
        })
        .collect())
}

fn holder_fallacy<T: Scalar>(own: T, holder: Player) -> Result<AnalysisResult<T>> {
    let mut result = fallacy_opened_unweighted(own.clone())?;
    result.player = holder;
    result.scenario = Scenario::TwoFixedOpened {
        revealed_holder: holder,
        revealed: own,
    };
    Ok(result)
}
