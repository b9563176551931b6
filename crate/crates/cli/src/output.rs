//! Serializable views of engine results. Rationals are always `p/q` strings.

use envlab::montecarlo::{SimulationResult, Verification};
use envlab::{format_rational, ExactAnalysis, ExactReturn, Rational, Scalar};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvView {
    pub value: String,
    pub units: String,
    #[serde(rename = "ref")]
    pub reference: Option<String>,
}

impl EvView {
    pub fn new(ev: &ExactReturn) -> Self {
        Self {
            value: format_rational(&ev.value),
            units: ev.units.as_str().to_string(),
            reference: ev.units.reference().map(|r| r.as_str().to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub scenario: String,
    pub player: String,
    pub formula: String,
    pub ev: EvView,
    pub decision: String,
    pub fallacy: bool,
}

impl ResultRow {
    pub fn new(result: &ExactAnalysis) -> Self {
        Self {
            scenario: result.scenario.to_string(),
            player: result.player.to_string(),
            formula: result.formula_id.to_string(),
            ev: EvView::new(&result.ev),
            decision: result.decision.to_string(),
            fallacy: result.is_fallacy,
        }
    }
}

/// `p/q (d.dddd)` for human-readable output.
pub fn with_decimal(value: &Rational) -> String {
    format!("{} ({:.4})", format_rational(value), value.approx())
}

fn units_label(units: &str, reference: &Option<String>) -> String {
    match reference {
        Some(r) => format!("{units}({r})"),
        None => units.to_string(),
    }
}

pub fn rows_csv(rows: &[ResultRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "scenario", "player", "formula", "ev", "units", "ref", "decision", "fallacy",
    ])
    .expect("in-memory write");
    for r in rows {
        w.write_record([
            r.scenario.as_str(),
            &r.player,
            &r.formula,
            &r.ev.value,
            &r.ev.units,
            r.ev.reference.as_deref().unwrap_or(""),
            &r.decision,
            if r.fallacy { "true" } else { "false" },
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

pub fn rows_md(rows: &[ResultRow], values: &[Rational]) -> String {
    let mut out = String::from("| Scenario | Player | Formula | Expected return | Units | Decision | Fallacy |\n");
    out.push_str("|---|---|---|---|---|---|---|\n");
    for (r, v) in rows.iter().zip(values) {
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} | {} | {} |\n",
            r.scenario,
            r.player,
            r.formula,
            with_decimal(v),
            units_label(&r.ev.units, &r.ev.reference),
            r.decision,
            if r.fallacy { "yes" } else { "no" }
        ));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationView {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
    pub units: String,
    #[serde(rename = "ref")]
    pub reference: Option<String>,
    pub analytic_target: Option<String>,
    pub z_score: Option<f64>,
    pub exchange_rate: f64,
}

impl SimulationView {
    pub fn new(r: &SimulationResult) -> Self {
        Self {
            mean: r.mean,
            std_error: r.std_error,
            trials: r.trials,
            units: r.units.as_str().to_string(),
            reference: r.units.reference().map(|x| x.as_str().to_string()),
            analytic_target: r.analytic_target.as_ref().map(format_rational),
            z_score: r.z_score,
            exchange_rate: r.exchange_rate,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentView {
    pub label: String,
    pub simulation: SimulationView,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationView {
    pub claim: ResultRow,
    pub threshold: f64,
    pub passed: bool,
    pub experiments: Vec<ExperimentView>,
}

impl VerificationView {
    pub fn new(v: &Verification) -> Self {
        Self {
            claim: ResultRow::new(&v.claim),
            threshold: v.threshold,
            passed: v.passed,
            experiments: v
                .experiments
                .iter()
                .map(|e| ExperimentView {
                    label: e.label.clone(),
                    simulation: SimulationView::new(&e.result),
                    passed: e.passed,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateDocument {
    pub scenario: String,
    pub player: String,
    pub measure: String,
    pub seed: u64,
    pub simulation: Option<SimulationView>,
    pub verification: Option<VerificationView>,
}
