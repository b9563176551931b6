use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Player {
    A,
    B,
}

impl Player {
    pub const BOTH: [Player; 2] = [Player::A, Player::B];

    pub fn other(self) -> Player {
        match self {
            Player::A => Player::B,
            Player::B => Player::A,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::A => "A",
            Player::B => "B",
        })
    }
}

impl FromStr for Player {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Player::A),
            "B" | "b" => Ok(Player::B),
            other => Err(Error::InvalidParameter(format!("unknown player `{other}`"))),
        }
    }
}

/// What the organizer announces about marginal (smallest/largest) amounts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MarginalInfo {
    #[default]
    NoInfo,
    ANonMarginal,
    BNonMarginal,
    BothNonMarginal,
}

impl MarginalInfo {
    pub fn excludes_a(self) -> bool {
        matches!(self, MarginalInfo::ANonMarginal | MarginalInfo::BothNonMarginal)
    }

    pub fn excludes_b(self) -> bool {
        matches!(self, MarginalInfo::BNonMarginal | MarginalInfo::BothNonMarginal)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MarginalInfo::NoInfo => "no-info",
            MarginalInfo::ANonMarginal => "a-non-marginal",
            MarginalInfo::BNonMarginal => "b-non-marginal",
            MarginalInfo::BothNonMarginal => "both-non-marginal",
        }
    }
}

impl FromStr for MarginalInfo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" | "no-info" => Ok(MarginalInfo::NoInfo),
            "a-non-marginal" => Ok(MarginalInfo::ANonMarginal),
            "b-non-marginal" => Ok(MarginalInfo::BNonMarginal),
            "both-non-marginal" => Ok(MarginalInfo::BothNonMarginal),
            other => Err(Error::InvalidParameter(format!("unknown marginal info `{other}`"))),
        }
    }
}

/// One game variation together with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Scenario<T> {
    TwoFixedClosed,
    TwoFixedNClosed {
        n: usize,
        base: T,
        marginal: MarginalInfo,
    },
    TwoFixedOpened {
        revealed_holder: Player,
        revealed: T,
    },
    TwoFixedBothOpened {
        amount_a: T,
        amount_b: T,
    },
    OneFixedClosed,
    OneFixedNClosed {
        amounts: Vec<T>,
        marginal: MarginalInfo,
    },
    OneFixedOpenedA {
        amount_a: T,
    },
    OneFixedOpenedB {
        amount_b: T,
    },
    OneFixedBothOpened {
        amount_a: T,
        amount_b: T,
    },
    BoundedLadder {
        min: T,
        levels: usize,
        observed: Option<(Player, T)>,
    },
}

fn positive<T: Scalar>(name: &str, value: &T) -> Result<()> {
    if value.is_positive_amount() {
        Ok(())
    } else {
        Err(Error::InvalidScenario(format!("{name} must be positive, got {value}")))
    }
}

fn double_or_half<T: Scalar>(a: &T, b: &T) -> Result<()> {
    if *b == a.double() || *a == b.double() {
        Ok(())
    } else {
        Err(Error::InvalidScenario(format!(
            "one amount must be exactly twice the other, got {a} and {b}"
        )))
    }
}

impl<T: Scalar> Scenario<T> {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::TwoFixedClosed => "two-fixed-closed",
            Scenario::TwoFixedNClosed { .. } => "two-fixed-n-closed",
            Scenario::TwoFixedOpened { .. } => "two-fixed-opened",
            Scenario::TwoFixedBothOpened { .. } => "two-fixed-both-opened",
            Scenario::OneFixedClosed => "one-fixed-closed",
            Scenario::OneFixedNClosed { .. } => "one-fixed-n-closed",
            Scenario::OneFixedOpenedA { .. } => "one-fixed-opened-a",
            Scenario::OneFixedOpenedB { .. } => "one-fixed-opened-b",
            Scenario::OneFixedBothOpened { .. } => "one-fixed-both-opened",
            Scenario::BoundedLadder { .. } => "bounded-ladder",
        }
    }

    pub fn is_one_fixed(&self) -> bool {
        matches!(
            self,
            Scenario::OneFixedClosed
                | Scenario::OneFixedNClosed { .. }
                | Scenario::OneFixedOpenedA { .. }
                | Scenario::OneFixedOpenedB { .. }
                | Scenario::OneFixedBothOpened { .. }
        )
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Scenario::TwoFixedClosed | Scenario::OneFixedClosed => Ok(()),
            Scenario::TwoFixedNClosed { n, base, .. } => {
                if *n < 3 {
                    return Err(Error::InvalidScenario(format!("need at least 3 envelopes, got {n}")));
                }
                positive("base", base)
            }
            Scenario::TwoFixedOpened { revealed, .. } => positive("revealed amount", revealed),
            Scenario::TwoFixedBothOpened { amount_a, amount_b }
            | Scenario::OneFixedBothOpened { amount_a, amount_b } => {
                positive("amount A", amount_a)?;
                positive("amount B", amount_b)?;
                double_or_half(amount_a, amount_b)
            }
            Scenario::OneFixedNClosed { amounts, .. } => {
                if amounts.is_empty() {
                    return Err(Error::InvalidScenario("amount list is empty".into()));
                }
                for (i, a) in amounts.iter().enumerate() {
                    positive("amount", a)?;
                    if amounts[..i].contains(a) {
                        return Err(Error::InvalidScenario(format!("duplicate amount {a}")));
                    }
                }
                Ok(())
            }
            Scenario::OneFixedOpenedA { amount_a } => positive("amount A", amount_a),
            Scenario::OneFixedOpenedB { amount_b } => positive("amount B", amount_b),
            Scenario::BoundedLadder { min, levels, observed } => {
                positive("ladder minimum", min)?;
                if *levels < 2 {
                    return Err(Error::InvalidScenario(format!(
                        "ladder needs at least 2 levels, got {levels}"
                    )));
                }
                if let Some((_, amount)) = observed {
                    let mut rung = min.clone();
                    for _ in 0..*levels {
                        if rung == *amount {
                            return Ok(());
                        }
                        rung = rung.double();
                    }
                    return Err(Error::InvalidScenario(format!(
                        "observed amount {amount} is not on the ladder"
                    )));
                }
                Ok(())
            }
        }
    }
}

impl<T: Scalar> fmt::Display for Scenario<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())?;
        match self {
            Scenario::TwoFixedClosed | Scenario::OneFixedClosed => Ok(()),
            Scenario::TwoFixedNClosed { n, base, marginal } => {
                write!(f, "(n={n},base={base},info={})", marginal.as_str())
            }
            Scenario::TwoFixedOpened {
                revealed_holder,
                revealed,
            } => {
                write!(f, "(holder={revealed_holder},revealed={revealed})")
            }
            Scenario::TwoFixedBothOpened { amount_a, amount_b }
            | Scenario::OneFixedBothOpened { amount_a, amount_b } => {
                write!(f, "(a={amount_a},b={amount_b})")
            }
            Scenario::OneFixedNClosed { amounts, marginal } => {
                let list: Vec<String> = amounts.iter().map(|a| a.to_string()).collect();
                write!(f, "(amounts={},info={})", list.join(";"), marginal.as_str())
            }
            Scenario::OneFixedOpenedA { amount_a } => write!(f, "(a={amount_a})"),
            Scenario::OneFixedOpenedB { amount_b } => write!(f, "(b={amount_b})"),
            Scenario::BoundedLadder { min, levels, observed } => {
                write!(f, "(min={min},levels={levels}")?;
                if let Some((player, amount)) = observed {
                    write!(f, ",observed={player}:{amount}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// The unknown quantity a fractional expected return is a multiple of.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AmountRef {
    PlayerAFixedAmount,
    MeanOfAllAmounts,
    MeanOfNonMarginalAmounts,
}

impl AmountRef {
    pub fn as_str(self) -> &'static str {
        match self {
            AmountRef::PlayerAFixedAmount => "player-a-fixed-amount",
            AmountRef::MeanOfAllAmounts => "mean-of-all-amounts",
            AmountRef::MeanOfNonMarginalAmounts => "mean-of-non-marginal-amounts",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Units {
    Euros,
    FractionOf(AmountRef),
    SuccessFactor,
}

impl Units {
    pub fn as_str(self) -> &'static str {
        match self {
            Units::Euros => "euros",
            Units::FractionOf(_) => "fraction-of",
            Units::SuccessFactor => "success-factor",
        }
    }

    pub fn reference(self) -> Option<AmountRef> {
        match self {
            Units::FractionOf(r) => Some(r),
            _ => None,
        }
    }
}

impl fmt::Display for Units {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Units::FractionOf(r) => write!(f, "fraction-of({})", r.as_str()),
            other => f.write_str(other.as_str()),
        }
    }
}

/// An expected return of exchanging, tagged with the units it is expressed in.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectedReturn<T> {
    pub value: T,
    pub units: Units,
}

impl<T: Scalar> ExpectedReturn<T> {
    pub fn new(value: T, units: Units) -> Self {
        Self { value, units }
    }

    pub fn euros(value: T) -> Self {
        Self::new(value, Units::Euros)
    }

    pub fn fraction_of(value: T, reference: AmountRef) -> Self {
        Self::new(value, Units::FractionOf(reference))
    }

    pub fn success_factor(value: T) -> Self {
        Self::new(value, Units::SuccessFactor)
    }

    pub fn decision(&self) -> Decision {
        decide(self)
    }

    /// Adds two returns of the same units; mixing units is refused.
    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.units != other.units {
            return Err(Error::InvalidParameter(format!(
                "cannot combine {} with {}",
                self.units, other.units
            )));
        }
        Ok(Self::new(self.value.clone() + other.value.clone(), self.units))
    }

    pub fn scale(&self, factor: &T) -> Self {
        Self::new(self.value.clone() * factor.clone(), self.units)
    }
}

impl<T: Scalar> Neg for ExpectedReturn<T> {
    type Output = Self;

    fn neg(self) -> Self {
        Self::new(-self.value, self.units)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Decision {
    Trade,
    Keep,
    Indifferent,
}

impl Decision {
    pub fn flip(self) -> Decision {
        match self {
            Decision::Trade => Decision::Keep,
            Decision::Keep => Decision::Trade,
            Decision::Indifferent => Decision::Indifferent,
        }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::Trade => "Trade",
            Decision::Keep => "Keep",
            Decision::Indifferent => "Indifferent",
        })
    }
}

impl FromStr for Decision {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "trade" => Ok(Decision::Trade),
            "keep" => Ok(Decision::Keep),
            "indifferent" => Ok(Decision::Indifferent),
            other => Err(Error::InvalidParameter(format!("unknown decision `{other}`"))),
        }
    }
}

/// Sign of the expected return decides; exactly zero is indifferent, no tolerance.
pub fn decide<T: Scalar>(ev: &ExpectedReturn<T>) -> Decision {
    if ev.value.is_zero() {
        Decision::Indifferent
    } else if ev.value.is_positive() {
        Decision::Trade
    } else {
        Decision::Keep
    }
}
