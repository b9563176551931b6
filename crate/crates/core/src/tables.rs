//! Enumerated deal tables for the N-envelope variations.
//!
//! Rows are equally likely deals. Marginal-amount announcements are modeled as
//! conditioning: rows that the organizer would re-draw are deleted and the
//! remaining probabilities renormalized.

use std::fmt::Write as _;

use crate::analytic::AnalysisResult;
use crate::error::{Error, Result};
use crate::scalar::{format_rational, Rational, Scalar};
use crate::types::{AmountRef, ExpectedReturn, MarginalInfo, Player, Scenario};

#[derive(Debug, Clone, PartialEq)]
pub struct DealEvent<T> {
    pub amount_a: T,
    pub amount_b: T,
    pub return_for_a: T,
}

impl<T: Scalar> DealEvent<T> {
    pub fn new(amount_a: T, amount_b: T) -> Self {
        let return_for_a = amount_b.clone() - amount_a.clone();
        Self {
            amount_a,
            amount_b,
            return_for_a,
        }
    }

    pub fn return_for(&self, player: Player) -> T {
        match player {
            Player::A => self.return_for_a.clone(),
            Player::B => -self.return_for_a.clone(),
        }
    }

    pub fn amount_of(&self, player: Player) -> &T {
        match player {
            Player::A => &self.amount_a,
            Player::B => &self.amount_b,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFamily {
    /// Two consecutive envelopes of a doubling ladder, assigned at random.
    TwoFixedGeometric,
    /// A's amount drawn from the list, B's amount by coin.
    OneFixedArbitrary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EventTable<T> {
    pub events: Vec<DealEvent<T>>,
    pub family: TableFamily,
    /// The organizer's envelope amounts, ascending.
    pub amounts: Vec<T>,
    pub probability_per_event: T,
}

fn uniform<T: Scalar>(count: usize) -> T {
    T::one() / T::from_int(count as i64)
}

pub fn ladder_amounts<T: Scalar>(n: usize, base: &T) -> Vec<T> {
    std::iter::successors(Some(base.clone()), |a| Some(a.double()))
        .take(n)
        .collect()
}

fn mean<T: Scalar>(values: &[T]) -> T {
    let sum = values.iter().cloned().fold(T::zero(), |acc, v| acc + v);
    sum / T::from_int(values.len() as i64)
}

pub fn build_two_fixed_table<T: Scalar>(n: usize, base: T) -> Result<EventTable<T>> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("need at least 3 envelopes, got {n}")));
    }
    if !base.is_positive_amount() {
        return Err(Error::InvalidParameter(format!("base must be positive, got {base}")));
    }
    let amounts = ladder_amounts(n, &base);
    let mut events = Vec::with_capacity(2 * n - 2);
    for (i, a) in amounts.iter().enumerate() {
        if i > 0 {
            events.push(DealEvent::new(a.clone(), amounts[i - 1].clone()));
        }
        if i + 1 < n {
            events.push(DealEvent::new(a.clone(), amounts[i + 1].clone()));
        }
    }
    let probability_per_event = uniform(events.len());
    Ok(EventTable {
        events,
        family: TableFamily::TwoFixedGeometric,
        amounts,
        probability_per_event,
    })
}

pub fn build_one_fixed_table<T: Scalar>(amounts: &[T]) -> Result<EventTable<T>> {
    if amounts.is_empty() {
        return Err(Error::InvalidParameter("amount list is empty".into()));
    }
    let mut sorted = amounts.to_vec();
    sorted.sort_by(|x, y| x.partial_cmp(y).expect("amounts are comparable"));
    for (i, a) in sorted.iter().enumerate() {
        if !a.is_positive_amount() {
            return Err(Error::InvalidParameter(format!("amounts must be positive, got {a}")));
        }
        if i > 0 && sorted[i - 1] == *a {
            return Err(Error::InvalidParameter(format!("duplicate amount {a}")));
        }
    }
    let events: Vec<_> = sorted
        .iter()
        .flat_map(|a| {
            [
                DealEvent::new(a.clone(), a.half()),
                DealEvent::new(a.clone(), a.double()),
            ]
        })
        .collect();
    let probability_per_event = uniform(events.len());
    Ok(EventTable {
        events,
        family: TableFamily::OneFixedArbitrary,
        amounts: sorted,
        probability_per_event,
    })
}

pub fn is_doubling_ladder<T: Scalar>(sorted_amounts: &[T]) -> bool {
    sorted_amounts.windows(2).all(|w| w[1] == w[0].double())
}

impl<T: Scalar> EventTable<T> {
    /// Amounts strictly between the smallest and the largest.
    pub fn inner_amounts(&self) -> &[T] {
        if self.amounts.len() <= 2 {
            &[]
        } else {
            &self.amounts[1..self.amounts.len() - 1]
        }
    }

    pub fn mean_amount(&self) -> T {
        mean(&self.amounts)
    }

    /// Mean of the non-marginal amounts, if there are any.
    pub fn inner_mean_amount(&self) -> Option<T> {
        let inner = self.inner_amounts();
        (!inner.is_empty()).then(|| mean(inner))
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }
}

/// Keeps only the deals consistent with the announcement and renormalizes.
///
/// A "non-marginal" envelope must hold one of the organizer's inner amounts. For
/// the one-fixed family with information about B this requires the amounts to
/// form a doubling ladder, since B's amount is otherwise not one of them.
pub fn filter_marginal<T: Scalar>(table: &EventTable<T>, info: MarginalInfo) -> Result<EventTable<T>> {
    if info == MarginalInfo::NoInfo {
        return Ok(table.clone());
    }
    if table.family == TableFamily::OneFixedArbitrary && info.excludes_b() && !is_doubling_ladder(&table.amounts) {
        return Err(Error::InvalidParameter(
            "information about B's envelope needs amounts forming a doubling ladder".into(),
        ));
    }
    let inner = table.inner_amounts();
    let events: Vec<_> = table
        .events
        .iter()
        .filter(|e| !info.excludes_a() || inner.contains(&e.amount_a))
        .filter(|e| !info.excludes_b() || inner.contains(&e.amount_b))
        .cloned()
        .collect();
    if events.is_empty() {
        return Err(Error::DegenerateScenario(format!(
            "no deal survives the {} announcement with {} amounts",
            info.as_str(),
            table.amounts.len()
        )));
    }
    let probability_per_event = uniform(events.len());
    Ok(EventTable {
        events,
        family: table.family,
        amounts: table.amounts.clone(),
        probability_per_event,
    })
}

/// Probability-weighted sum of each row's exchange return for `player`, in euros.
pub fn table_ev<T: Scalar>(table: &EventTable<T>, player: Player) -> ExpectedReturn<T> {
    let total = table
        .events
        .iter()
        .map(|e| table.probability_per_event.clone() * e.return_for(player))
        .fold(T::zero(), |acc, v| acc + v);
    ExpectedReturn::euros(total)
}

/// Builds the (possibly filtered) table an N-envelope scenario is played over.
pub fn table_for_scenario<T: Scalar>(scenario: &Scenario<T>) -> Result<EventTable<T>> {
    match scenario {
        Scenario::TwoFixedNClosed { n, base, marginal } => {
            filter_marginal(&build_two_fixed_table(*n, base.clone())?, *marginal)
        }
        Scenario::OneFixedNClosed { amounts, marginal } => filter_marginal(&build_one_fixed_table(amounts)?, *marginal),
        other => Err(Error::InvalidParameter(format!(
            "{} is not an N-envelope variation",
            other.name()
        ))),
    }
}

pub(crate) fn analyze_n_envelopes<T: Scalar>(scenario: &Scenario<T>, player: Player) -> Result<AnalysisResult<T>> {
    let table = table_for_scenario(scenario)?;
    let ev = table_ev(&table, player);
    let (formula, explanation) = match scenario {
        Scenario::TwoFixedNClosed { marginal, .. } => match (marginal, player) {
            (MarginalInfo::ANonMarginal, Player::A) | (MarginalInfo::BNonMarginal, Player::B) => (
                "1.2.2",
                "the informed player's marginal rows are deleted; he gains a quarter of the inner mean",
            ),
            (MarginalInfo::ANonMarginal, Player::B) | (MarginalInfo::BNonMarginal, Player::A) => {
                ("1.2.3", "the other player's marginal rows are deleted; signs reverse")
            }
            _ => ("1.2.1", "returns cancel in pairs over the whole table"),
        },
        Scenario::OneFixedNClosed { marginal, .. } => match (marginal, player) {
            (MarginalInfo::BNonMarginal, Player::B) => ("2.2.3", "re-drawn deals delete B's marginal rows"),
            (MarginalInfo::BNonMarginal, Player::A) => {
                ("2.2.4", "re-drawn deals delete B's marginal rows; signs reverse")
            }
            (MarginalInfo::BothNonMarginal, _) => (
                "1.2.1",
                "same table as both players non-marginal with two fixed amounts",
            ),
            (_, Player::A) => ("2.2.1", "a quarter of the mean of the amounts A's envelope can hold"),
            (_, Player::B) => ("2.2.2", "opposite sign of every row for B"),
        },
        _ => unreachable!("checked by table_for_scenario"),
    };
    Ok(AnalysisResult::new(scenario.clone(), player, ev, formula, explanation))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubcaseRow<T> {
    pub label: &'static str,
    pub family: TableFamily,
    pub info: MarginalInfo,
    pub ev_a: ExpectedReturn<T>,
    pub ev_b: ExpectedReturn<T>,
    /// The same returns divided by the reference mean amount.
    pub relative_a: ExpectedReturn<T>,
    pub relative_b: ExpectedReturn<T>,
}

/// The six N-envelope results for a doubling ladder of `n` amounts starting at `base`.
pub fn summarize_subcases<T: Scalar>(n: usize, base: T) -> Result<Vec<SubcaseRow<T>>> {
    if n < 4 {
        return Err(Error::InvalidParameter(format!(
            "subcase summary needs n >= 4, got {n}"
        )));
    }
    let two = build_two_fixed_table(n, base.clone())?;
    let one = build_one_fixed_table(&ladder_amounts(n, &base))?;
    let inner_one = build_one_fixed_table(two.inner_amounts())?;
    let all_mean = two.mean_amount();
    let inner_mean = two.inner_mean_amount().expect("n >= 4 has inner amounts");

    let specs: [(&'static str, &EventTable<T>, MarginalInfo, AmountRef); 6] = [
        ("two-fixed", &two, MarginalInfo::NoInfo, AmountRef::MeanOfAllAmounts),
        (
            "two-fixed A non-marginal",
            &two,
            MarginalInfo::ANonMarginal,
            AmountRef::MeanOfNonMarginalAmounts,
        ),
        (
            "two-fixed both non-marginal",
            &two,
            MarginalInfo::BothNonMarginal,
            AmountRef::MeanOfNonMarginalAmounts,
        ),
        ("one-fixed", &one, MarginalInfo::NoInfo, AmountRef::MeanOfAllAmounts),
        (
            "one-fixed B non-marginal",
            &one,
            MarginalInfo::BNonMarginal,
            AmountRef::MeanOfNonMarginalAmounts,
        ),
        // Re-drawing whenever A's amount is marginal is the plain one-fixed game over the inner envelopes.
        (
            "one-fixed A non-marginal",
            &inner_one,
            MarginalInfo::NoInfo,
            AmountRef::MeanOfNonMarginalAmounts,
        ),
    ];
    specs
        .into_iter()
        .map(|(label, table, info, reference)| {
            let filtered = filter_marginal(table, info)?;
            let ev_a = table_ev(&filtered, Player::A);
            let ev_b = table_ev(&filtered, Player::B);
            let denom = match reference {
                AmountRef::MeanOfAllAmounts => all_mean.clone(),
                _ => inner_mean.clone(),
            };
            let relative =
                |ev: &ExpectedReturn<T>| ExpectedReturn::fraction_of(ev.value.clone() / denom.clone(), reference);
            Ok(SubcaseRow {
                label,
                family: table.family,
                info: if label == "one-fixed A non-marginal" {
                    MarginalInfo::ANonMarginal
                } else {
                    info
                },
                relative_a: relative(&ev_a),
                relative_b: relative(&ev_b),
                ev_a,
                ev_b,
            })
        })
        .collect()
}

impl EventTable<Rational> {
    /// CSV with header `amount_a,amount_b,return_for_a,probability`, values as `p/q`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("amount_a,amount_b,return_for_a,probability\n");
        for e in &self.events {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                format_rational(&e.amount_a),
                format_rational(&e.amount_b),
                format_rational(&e.return_for_a),
                format_rational(&self.probability_per_event)
            );
        }
        out
    }
}

/// Sum of returns for A over the rows; zero for any complete two-fixed table.
pub fn total_return<T: Scalar>(table: &EventTable<T>) -> T {
    table
        .events
        .iter()
        .fold(T::zero(), |acc, e| acc + e.return_for_a.clone())
}

pub fn is_zero_sum<T: Scalar>(table: &EventTable<T>) -> bool {
    total_return(table).is_zero()
}
