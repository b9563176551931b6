//! Command implementations behind the `envlab` binary. Each command renders to a
//! string so it can be tested without spawning a process.

pub mod args;
pub mod output;
pub mod summary;

use anyhow::{anyhow, bail, Context};
use clap::ValueEnum;
use envlab::ladder::{conditional_exchange_ev, solve_ladder, LadderSpec};
use envlab::montecarlo::{self, Measure, Policy, SimulationConfig, VerifyOptions};
use envlab::tables::{build_one_fixed_table, build_two_fixed_table, filter_marginal, ladder_amounts, table_ev};
use envlab::{
    analyze_scenario, decide, fallacies_for, format_rational, ExactAnalysis, ExactScenario, ExactTable, Player,
    Rational, Scenario,
};
use serde::Serialize;

use args::{
    AnalyzeArgs, Cli, Command, Family, Format, LadderArgs, MeasureArg, PolicyArg, ScenarioArgs, SimulateArgs,
    TableArgs, Variant,
};
use output::{rows_csv, rows_md, with_decimal, EvView, ResultRow, SimulateDocument, SimulationView, VerificationView};

/// What a command printed and the process exit code it asks for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub exit_code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { stdout, exit_code: 0 }
    }
}

pub fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    match &cli.command {
        Command::Analyze(a) => cmd_analyze(a, cli.format.unwrap_or(Format::Json)).map(Outcome::ok),
        Command::Table(a) => cmd_table(a, cli.format.unwrap_or(Format::Csv)).map(Outcome::ok),
        Command::Simulate(a) => cmd_simulate(a, cli.format.unwrap_or(Format::Json), cli.seed.unwrap_or(0)),
        Command::Ladder(a) => cmd_ladder(a, cli.format.unwrap_or(Format::Json)).map(Outcome::ok),
        Command::Summary => cmd_summary(cli.format.unwrap_or(Format::Md)).map(Outcome::ok),
    }
}

fn json<T: Serialize + ?Sized>(value: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn need<T: Clone>(value: &Option<T>, flag: &str, variant: &str) -> anyhow::Result<T> {
    value
        .clone()
        .ok_or_else(|| anyhow!("--{flag} is required for {variant}"))
}

/// Builds the scenario named by the flags. `observer` is who saw `--observed` on a ladder.
pub fn build_scenario(a: &ScenarioArgs, observer: Player) -> anyhow::Result<ExactScenario> {
    let name = a
        .variant
        .to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default();
    let v = name.as_str();
    let scenario = match a.variant {
        Variant::TwoFixedClosed => Scenario::TwoFixedClosed,
        Variant::TwoFixedNClosed => Scenario::TwoFixedNClosed {
            n: need(&a.n, "n", v)?,
            base: need(&a.base, "base", v)?,
            marginal: a.marginal_info,
        },
        Variant::TwoFixedOpened => Scenario::TwoFixedOpened {
            revealed_holder: a.holder,
            revealed: need(&a.revealed, "revealed", v)?,
        },
        Variant::TwoFixedBothOpened => Scenario::TwoFixedBothOpened {
            amount_a: need(&a.amount_a, "amount-a", v)?,
            amount_b: need(&a.amount_b, "amount-b", v)?,
        },
        Variant::OneFixedClosed => Scenario::OneFixedClosed,
        Variant::OneFixedNClosed => {
            let amounts = match (&a.amounts, a.n, &a.base) {
                (Some(list), _, _) => list.clone(),
                (None, Some(n), Some(base)) => ladder_amounts(n, base),
                _ => bail!("--amounts (or --n with --base) is required for {v}"),
            };
            Scenario::OneFixedNClosed {
                amounts,
                marginal: a.marginal_info,
            }
        }
        Variant::OneFixedOpenedA => Scenario::OneFixedOpenedA {
            amount_a: a
                .revealed
                .or(a.amount_a)
                .ok_or_else(|| anyhow!("--revealed is required for {v}"))?,
        },
        Variant::OneFixedOpenedB => Scenario::OneFixedOpenedB {
            amount_b: a
                .revealed
                .or(a.amount_b)
                .ok_or_else(|| anyhow!("--revealed is required for {v}"))?,
        },
        Variant::OneFixedBothOpened => Scenario::OneFixedBothOpened {
            amount_a: need(&a.amount_a, "amount-a", v)?,
            amount_b: need(&a.amount_b, "amount-b", v)?,
        },
        Variant::BoundedLadder => Scenario::BoundedLadder {
            min: need(&a.min, "min", v)?,
            levels: need(&a.levels, "levels", v)?,
            observed: a.observed.map(|x| (observer, x)),
        },
    };
    scenario.validate()?;
    Ok(scenario)
}

fn render_rows(results: &[ExactAnalysis], format: Format) -> anyhow::Result<String> {
    let rows: Vec<ResultRow> = results.iter().map(ResultRow::new).collect();
    match format {
        Format::Json => json(&rows),
        Format::Csv => Ok(rows_csv(&rows)),
        Format::Md => {
            let values: Vec<Rational> = results.iter().map(|r| r.ev.value).collect();
            Ok(rows_md(&rows, &values))
        }
    }
}

pub fn cmd_analyze(a: &AnalyzeArgs, format: Format) -> anyhow::Result<String> {
    let players: Vec<Player> = match (a.player, a.scenario.variant) {
        (Some(p), _) => vec![p],
        (None, Variant::BoundedLadder) => bail!("--player is required for bounded-ladder"),
        (None, _) => Player::BOTH.to_vec(),
    };
    let mut results = Vec::new();
    for &player in &players {
        let scenario = build_scenario(&a.scenario, player)?;
        results.push(analyze_scenario(&scenario, player)?);
    }
    if a.show_fallacies {
        for &player in &players {
            results.extend(fallacies_for(&build_scenario(&a.scenario, player)?, player)?);
        }
    }
    render_rows(&results, format)
}

#[derive(Serialize)]
struct EventView {
    amount_a: String,
    amount_b: String,
    return_for_a: String,
    probability: String,
}

#[derive(Serialize)]
struct TableDocument {
    family: &'static str,
    marginal_info: &'static str,
    amounts: Vec<String>,
    events: Vec<EventView>,
    ev_a: EvView,
    ev_b: EvView,
}

pub fn build_table(a: &TableArgs) -> anyhow::Result<ExactTable> {
    let table = match a.family {
        Family::TwoFixed => build_two_fixed_table(
            a.n.context("--n is required for the two-fixed family")?,
            a.base.context("--base is required for the two-fixed family")?,
        )?,
        Family::OneFixed => match (&a.amounts, a.n, a.base) {
            (Some(list), _, _) => build_one_fixed_table(list)?,
            (None, Some(n), Some(base)) => build_one_fixed_table(&ladder_amounts(n, &base))?,
            _ => bail!("--amounts (or --n with --base) is required for the one-fixed family"),
        },
    };
    Ok(filter_marginal(&table, a.marginal_info)?)
}

pub fn cmd_table(a: &TableArgs, format: Format) -> anyhow::Result<String> {
    let table = build_table(a)?;
    let (ev_a, ev_b) = (table_ev(&table, Player::A), table_ev(&table, Player::B));
    match format {
        Format::Csv => Ok(table.to_csv()),
        Format::Json => json(&TableDocument {
            family: match a.family {
                Family::TwoFixed => "two-fixed",
                Family::OneFixed => "one-fixed",
            },
            marginal_info: a.marginal_info.as_str(),
            amounts: table.amounts.iter().map(format_rational).collect(),
            events: table
                .events
                .iter()
                .map(|e| EventView {
                    amount_a: format_rational(&e.amount_a),
                    amount_b: format_rational(&e.amount_b),
                    return_for_a: format_rational(&e.return_for_a),
                    probability: format_rational(&table.probability_per_event),
                })
                .collect(),
            ev_a: EvView::new(&ev_a),
            ev_b: EvView::new(&ev_b),
        }),
        Format::Md => {
            let mut out = String::from("| Amount A | Amount B | Return for A | Probability |\n|---|---|---|---|\n");
            for e in &table.events {
                out.push_str(&format!(
                    "| {} | {} | {} | {} |\n",
                    format_rational(&e.amount_a),
                    format_rational(&e.amount_b),
                    format_rational(&e.return_for_a),
                    format_rational(&table.probability_per_event)
                ));
            }
            out.push_str(&format!(
                "\nE(A) = {}, E(B) = {}\n",
                with_decimal(&ev_a.value),
                with_decimal(&ev_b.value)
            ));
            Ok(out)
        }
    }
}

fn policy(p: PolicyArg) -> Policy {
    match p {
        PolicyArg::AlwaysTrade => Policy::AlwaysTrade,
        PolicyArg::AlwaysKeep => Policy::AlwaysKeep,
        PolicyArg::EquilibriumLadder => Policy::EquilibriumLadder,
    }
}

fn measure(m: MeasureArg) -> Measure {
    match m {
        MeasureArg::EuroReturn => Measure::EuroReturn,
        MeasureArg::SuccessFactor => Measure::SuccessFactor,
        MeasureArg::FractionOfAFixed => Measure::FractionOfAFixed,
    }
}

/// The claim `--verify` checks: the correct analysis, or the fallacy named by `--claim`.
fn claim_for(scenario: &ExactScenario, player: Player, id: Option<&str>) -> anyhow::Result<ExactAnalysis> {
    let correct = analyze_scenario(scenario, player)?;
    match id {
        None => Ok(correct),
        Some(id) if id == correct.formula_id => Ok(correct),
        Some(id) => fallacies_for(scenario, player)?
            .into_iter()
            .find(|f| f.formula_id == id)
            .ok_or_else(|| anyhow!("formula {id} is not a claim about {scenario} for player {player}")),
    }
}

pub fn cmd_simulate(a: &SimulateArgs, format: Format, seed: u64) -> anyhow::Result<Outcome> {
    let scenario = build_scenario(&a.scenario, a.player)?;
    let claim = if a.verify {
        Some(claim_for(&scenario, a.player, a.claim.as_deref())?)
    } else {
        None
    };
    let analysis = analyze_scenario(&scenario, a.player).ok();
    let meas = match (a.measure, &claim, &analysis) {
        (Some(m), _, _) => measure(m),
        (None, Some(c), _) | (None, None, Some(c)) => Measure::for_units(c.ev.units)?,
        (None, None, None) => Measure::EuroReturn,
    };
    if let Some(c) = &claim {
        if meas.units() != c.ev.units {
            bail!(
                "measure {} does not match the claim's units {}",
                meas.as_str(),
                c.ev.units
            );
        }
    }

    let mut doc = SimulateDocument {
        scenario: scenario.to_string(),
        player: a.player.to_string(),
        measure: meas.as_str().to_string(),
        seed,
        simulation: None,
        verification: None,
    };
    let mut exit_code = 0;
    match &claim {
        Some(c) => {
            let v = montecarlo::verify_claim(
                c,
                VerifyOptions {
                    trials: a.trials,
                    seed,
                    threshold: a.threshold,
                    workers: a.workers,
                },
            )?;
            if !v.passed {
                exit_code = 1;
            }
            doc.verification = Some(VerificationView::new(&v));
        }
        None => {
            let cfg = SimulationConfig {
                policy_a: policy(a.policy_a),
                policy_b: policy(a.policy_b),
                workers: a.workers,
                ..SimulationConfig::new(scenario.clone(), a.player, a.trials, seed)
            };
            let mut r = montecarlo::run_simulation(&cfg, meas)?;
            let plain = a.policy_a == PolicyArg::AlwaysTrade && a.policy_b == PolicyArg::AlwaysTrade;
            if let Some(an) = analysis.filter(|an| plain && an.ev.units == meas.units() && an.formula_id != "-") {
                r = r.with_target(an.ev.value);
            }
            doc.simulation = Some(SimulationView::new(&r));
        }
    }
    let stdout = match format {
        Format::Json => json(&doc)?,
        Format::Csv => simulate_csv(&doc),
        Format::Md => simulate_md(&doc),
    };
    Ok(Outcome { stdout, exit_code })
}

fn simulation_lines(doc: &SimulateDocument) -> Vec<(String, &SimulationView, Option<bool>)> {
    match (&doc.simulation, &doc.verification) {
        (Some(s), _) => vec![(doc.scenario.clone(), s, None)],
        (None, Some(v)) => v
            .experiments
            .iter()
            .map(|e| (e.label.clone(), &e.simulation, Some(e.passed)))
            .collect(),
        (None, None) => Vec::new(),
    }
}

fn simulate_csv(doc: &SimulateDocument) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "experiment",
        "mean",
        "std_error",
        "trials",
        "units",
        "ref",
        "analytic_target",
        "z_score",
        "exchange_rate",
        "passed",
    ])
    .expect("in-memory write");
    for (label, s, passed) in simulation_lines(doc) {
        w.write_record([
            label,
            s.mean.to_string(),
            s.std_error.to_string(),
            s.trials.to_string(),
            s.units.clone(),
            s.reference.clone().unwrap_or_default(),
            s.analytic_target.clone().unwrap_or_default(),
            s.z_score.map(|z| z.to_string()).unwrap_or_default(),
            s.exchange_rate.to_string(),
            passed.map(|p| p.to_string()).unwrap_or_default(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

fn simulate_md(doc: &SimulateDocument) -> String {
    let mut out = format!(
        "Simulation of {} for player {} (measure {}, seed {})\n\n",
        doc.scenario, doc.player, doc.measure, doc.seed
    );
    if let Some(v) = &doc.verification {
        out.push_str(&format!(
            "Claim {} = {} {}: {}\n\n",
            v.claim.formula,
            v.claim.ev.value,
            v.claim.ev.units,
            if v.passed { "PASS" } else { "FAIL" }
        ));
    }
    out.push_str("| Experiment | Mean | Std. error | Target | z | Exchange rate |\n|---|---|---|---|---|---|\n");
    for (label, s, _) in simulation_lines(doc) {
        out.push_str(&format!(
            "| {} | {:.4} | {:.4} | {} | {} | {:.4} |\n",
            label,
            s.mean,
            s.std_error,
            s.analytic_target.as_deref().unwrap_or("-"),
            s.z_score.map(|z| format!("{z:.2}")).unwrap_or_else(|| "-".into()),
            s.exchange_rate
        ));
    }
    out
}

#[derive(Serialize)]
struct LevelView {
    level: usize,
    amount: String,
    request: bool,
}

#[derive(Serialize)]
struct StepView {
    level: usize,
    amount: String,
    request: bool,
    justification: String,
}

#[derive(Serialize)]
struct ObservedView {
    player: String,
    amount: String,
    decision: String,
    conditional_ev: EvView,
    accepted_in_equilibrium: bool,
}

#[derive(Serialize)]
struct LadderDocument {
    amounts: Vec<String>,
    policy: Vec<LevelView>,
    trace: Vec<StepView>,
    observed: Option<ObservedView>,
}

pub fn cmd_ladder(a: &LadderArgs, format: Format) -> anyhow::Result<String> {
    let spec = LadderSpec::new(a.min, a.levels)?;
    let (policy, trace) = solve_ladder(&spec);
    let observed = match &a.observed {
        None => None,
        Some(x) => {
            let cond = conditional_exchange_ev(&spec, x, a.player)?;
            let level = spec.level_of(x).expect("checked by conditional_exchange_ev");
            let decision = if policy.requests(level) {
                envlab::Decision::Trade
            } else {
                decide(cond.value_if_accepted())
            };
            Some(ObservedView {
                player: a.player.to_string(),
                amount: format_rational(x),
                decision: decision.to_string(),
                conditional_ev: EvView::new(cond.value_if_accepted()),
                accepted_in_equilibrium: cond.is_possible(),
            })
        }
    };
    let doc = LadderDocument {
        amounts: spec.amounts().iter().map(format_rational).collect(),
        policy: (0..spec.levels())
            .map(|l| LevelView {
                level: l,
                amount: format_rational(&spec.amount_at(l)),
                request: policy.requests(l),
            })
            .collect(),
        trace: trace
            .steps
            .iter()
            .map(|s| StepView {
                level: s.level,
                amount: format_rational(&s.amount),
                request: s.request,
                justification: s.justification.clone(),
            })
            .collect(),
        observed,
    };
    match format {
        Format::Json => json(&doc),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["level", "amount", "request", "justification"])?;
            for s in &doc.trace {
                w.write_record([
                    s.level.to_string(),
                    s.amount.clone(),
                    s.request.to_string(),
                    s.justification.clone(),
                ])?;
            }
            Ok(String::from_utf8(w.into_inner()?)?)
        }
        Format::Md => {
            let mut out = String::from("| Level | Amount | Request | Reasoning |\n|---|---|---|---|\n");
            for s in &doc.trace {
                out.push_str(&format!(
                    "| {} | {} | {} | {} |\n",
                    s.level,
                    s.amount,
                    if s.request { "yes" } else { "no" },
                    s.justification
                ));
            }
            if let Some(o) = &doc.observed {
                out.push_str(&format!(
                    "\nPlayer {} observing {}: {}, return if the exchange is accepted {} {}{}\n",
                    o.player,
                    o.amount,
                    o.decision,
                    o.conditional_ev.value,
                    o.conditional_ev.units,
                    if o.accepted_in_equilibrium {
                        ""
                    } else {
                        " (never accepted in equilibrium)"
                    }
                ));
            }
            Ok(out)
        }
    }
}

pub fn cmd_summary(format: Format) -> anyhow::Result<String> {
    let rows = summary::summary_rows()?;
    Ok(match format {
        Format::Json => json(&rows)?,
        Format::Csv => summary::summary_csv(&rows),
        Format::Md => summary::summary_md(&rows),
    })
}
