//! Summary of calculations and decisions for every variation.

use envlab::{analyze_scenario, ExactAnalysis, ExactScenario, Player, Rational, Result, Scenario, Units};
use serde::{Deserialize, Serialize};

use crate::output::EvView;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub group: String,
    pub variation: String,
    pub title: String,
    pub e_a: String,
    pub e_b: String,
    pub decision_a: String,
    pub decision_b: String,
    pub formulas: String,
    pub exact_a: EvView,
    pub exact_b: EvView,
}

/// How a euro value is expressed symbolically: as a multiple of a named amount.
#[derive(Clone, Copy)]
enum Reference {
    None,
    Known(&'static str, i128),
    MeanOfAmounts,
}

struct RowSpec {
    group: &'static str,
    variation: &'static str,
    title: &'static str,
    scenario_a: ExactScenario,
    scenario_b: ExactScenario,
    reference_a: Reference,
    reference_b: Reference,
}

fn q(n: i128) -> Rational {
    Rational::from_integer(n)
}

fn specs() -> Vec<RowSpec> {
    let same = |group, variation, title, scenario: ExactScenario, reference| RowSpec {
        group,
        variation,
        title,
        scenario_a: scenario.clone(),
        scenario_b: scenario,
        reference_a: reference,
        reference_b: reference,
    };
    const TWO: &str = "Two fixed amounts";
    const ONE: &str = "One fixed amount";
    vec![
        same(
            TWO,
            "1.1",
            "Two closed envelopes",
            Scenario::TwoFixedClosed,
            Reference::None,
        ),
        same(
            TWO,
            "1.2",
            "Two closed envelopes selected from N envelopes",
            Scenario::TwoFixedNClosed {
                n: 4,
                base: q(10),
                marginal: Default::default(),
            },
            Reference::MeanOfAmounts,
        ),
        same(
            TWO,
            "1.3",
            "One opened envelope",
            Scenario::TwoFixedOpened {
                revealed_holder: Player::A,
                revealed: q(100),
            },
            Reference::None,
        ),
        same(
            TWO,
            "1.4",
            "Two opened envelopes",
            Scenario::TwoFixedBothOpened {
                amount_a: q(100),
                amount_b: q(200),
            },
            Reference::None,
        ),
        same(
            ONE,
            "2.1",
            "Two closed envelopes",
            Scenario::OneFixedClosed,
            Reference::None,
        ),
        same(
            ONE,
            "2.2",
            "Two closed envelopes selected from N envelopes",
            Scenario::OneFixedNClosed {
                amounts: vec![q(10), q(20), q(40), q(80)],
                marginal: Default::default(),
            },
            Reference::MeanOfAmounts,
        ),
        same(
            ONE,
            "2.3",
            "One opened envelope, known A",
            Scenario::OneFixedOpenedA { amount_a: q(100) },
            Reference::Known("A", 100),
        ),
        same(
            ONE,
            "2.4",
            "One opened envelope, known B",
            Scenario::OneFixedOpenedB { amount_b: q(100) },
            Reference::None,
        ),
        same(
            ONE,
            "2.5",
            "Two opened envelopes",
            Scenario::OneFixedBothOpened {
                amount_a: q(100),
                amount_b: q(200),
            },
            Reference::Known("A", 100),
        ),
        RowSpec {
            group: "One or two fixed amounts",
            variation: "3",
            title: "Two opened envelopes, known boundary amounts",
            scenario_a: Scenario::BoundedLadder {
                min: q(50),
                levels: 6,
                observed: Some((Player::A, q(200))),
            },
            scenario_b: Scenario::BoundedLadder {
                min: q(50),
                levels: 6,
                observed: Some((Player::B, q(100))),
            },
            reference_a: Reference::Known("A", 200),
            reference_b: Reference::Known("B", 100),
        },
    ]
}

fn multiple_of(symbol: &str, ratio: Rational) -> String {
    let sign = if ratio < q(0) { "-" } else { "+" };
    let ratio = if ratio < q(0) { -ratio } else { ratio };
    let numer = if *ratio.numer() == 1 {
        String::new()
    } else {
        ratio.numer().to_string()
    };
    let denom = if *ratio.denom() == 1 {
        String::new()
    } else {
        format!("/{}", ratio.denom())
    };
    format!("{sign}{numer}{symbol}{denom}")
}

fn symbolic(result: &ExactAnalysis, reference: Reference) -> String {
    let value = result.ev.value;
    if value == q(0) {
        return "0".into();
    }
    match (result.ev.units, reference) {
        (Units::FractionOf(_), _) => multiple_of("X", value),
        (Units::Euros, Reference::Known(symbol, amount)) => multiple_of(symbol, value / q(amount)),
        (Units::Euros, Reference::MeanOfAmounts) => {
            let table = envlab::tables::table_for_scenario(&result.scenario).expect("tabular scenario");
            multiple_of("<a>", value / table.mean_amount())
        }
        _ => envlab::format_rational(&value),
    }
}

pub fn summary_rows() -> Result<Vec<SummaryRow>> {
    specs()
        .into_iter()
        .map(|spec| {
            let a = analyze_scenario(&spec.scenario_a, Player::A)?;
            let b = analyze_scenario(&spec.scenario_b, Player::B)?;
            let formulas = if a.formula_id == b.formula_id {
                a.formula_id.to_string()
            } else {
                format!("{} - {}", a.formula_id, b.formula_id)
            };
            Ok(SummaryRow {
                group: spec.group.into(),
                variation: spec.variation.into(),
                title: spec.title.into(),
                e_a: symbolic(&a, spec.reference_a),
                e_b: symbolic(&b, spec.reference_b),
                decision_a: a.decision.to_string(),
                decision_b: b.decision.to_string(),
                formulas,
                exact_a: EvView::new(&a.ev),
                exact_b: EvView::new(&b.ev),
            })
        })
        .collect()
}

pub fn summary_md(rows: &[SummaryRow]) -> String {
    let mut out = String::from("# Summary of calculations and decisions\n");
    let mut group = "";
    for r in rows {
        if r.group != group {
            group = &r.group;
            out.push_str(&format!(
                "\n## {group}\n\n| Variation | Description | E(A) | E(B) | Decision A | Decision B | Formulas |\n|---|---|---|---|---|---|---|\n"
            ));
        }
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} | {} | {} |\n",
            r.variation, r.title, r.e_a, r.e_b, r.decision_a, r.decision_b, r.formulas
        ));
    }
    out.push_str(
        "\nA = known amount of player A, B = known amount of player B, X = unknown amount of player A, \
         <a> = average amount of all the initial envelopes\n",
    );
    out
}

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "variation",
        "description",
        "e_a",
        "e_b",
        "decision_a",
        "decision_b",
        "formulas",
        "exact_a",
        "exact_b",
    ])
    .expect("in-memory write");
    for r in rows {
        w.write_record([
            &r.variation,
            &r.title,
            &r.e_a,
            &r.e_b,
            &r.decision_a,
            &r.decision_b,
            &r.formulas,
            &r.exact_a.value,
            &r.exact_b.value,
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}
