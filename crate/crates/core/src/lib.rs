//! Expected-return analysis of two-envelope exchange games.
//!
//! * [`analytic`]: closed forms for every variation, plus the documented fallacies.
//! * [`tables`]: enumerated deal tables for the N-envelope variations.
//! * [`ladder`]: iterated elimination of requests on a known bounded ladder.
//! * [`montecarlo`]: seeded simulation that checks the analytic numbers.
//!
//! The analytic code is generic over [`Scalar`]; use the [`Rational`] aliases for
//! exact results.

pub mod analytic;
pub mod error;
pub mod ladder;
pub mod montecarlo;
pub mod scalar;
pub mod tables;
pub mod types;

pub use analytic::{analyze_scenario, fallacies_for, AnalysisResult};
pub use error::{Error, Result};
pub use scalar::{format_rational, parse_rational, Rational, Scalar};
pub use types::{decide, AmountRef, Decision, ExpectedReturn, MarginalInfo, Player, Scenario, Units};

pub type ExactScenario = Scenario<Rational>;
pub type ExactReturn = ExpectedReturn<Rational>;
pub type ExactAnalysis = AnalysisResult<Rational>;
pub type ExactTable = tables::EventTable<Rational>;
pub type ExactLadder = ladder::LadderSpec<Rational>;

pub type FloatScenario = Scenario<f64>;
pub type FloatReturn = ExpectedReturn<f64>;
pub type FloatAnalysis = AnalysisResult<f64>;
