//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest harness
//! so the lines are always printed; exits nonzero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use envlab::analytic::{
    fallacy_naive_quarter, fallacy_opened_b_quarter_mix, fallacy_opened_b_unweighted, fallacy_opened_unweighted,
};
use envlab::ladder::{conditional_exchange_ev, solve_ladder, LadderSpec};
use envlab::montecarlo::{event_frequencies, sample_deal, verify, SimulationConfig, DEFAULT_TRIALS};
use envlab::tables::{build_one_fixed_table, build_two_fixed_table, filter_marginal, table_ev};
use envlab::{
    analyze_scenario, AmountRef, Decision, ExactAnalysis, ExactReturn, ExactScenario, MarginalInfo, Player, Rational,
    Scenario, Units,
};
use envlab_cli::summary::summary_rows;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

// Pinned tolerances and limits.
const Z_LIMIT: f64 = 4.0;
const MC_TRIALS: u64 = DEFAULT_TRIALS;
const MC_SEED: u64 = 20_260_901;
const FAST_LIMIT: Duration = Duration::from_secs(1);
const MC_LIMIT: Duration = Duration::from_secs(60);
const RANDOM_LISTS: usize = 20;
const PROPERTY_CASES: usize = 200;

type Check = Result<String, String>;
/// Expected (value, units, decision) for players A and B.
type Expected = [(Rational, Units, Decision); 2];

fn q(n: i128) -> Rational {
    Rational::from_integer(n)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

fn analyze(s: &ExactScenario, p: Player) -> Result<ExactAnalysis, String> {
    analyze_scenario(s, p).map_err(|e| format!("{s} for {p}: {e}"))
}

fn expect_ev(r: &ExactAnalysis, value: Rational, units: Units, decision: Decision) -> Result<(), String> {
    ensure(r.ev == ExactReturn::new(value, units) && r.decision == decision, || {
        format!(
            "{} for {}: got {} {} {}, want {value} {units} {decision}",
            r.scenario, r.player, r.ev.value, r.ev.units, r.decision
        )
    })
}

fn summary_scenarios() -> Vec<(ExactScenario, Expected)> {
    let x = Units::FractionOf(AmountRef::PlayerAFixedAmount);
    let indiff = |u| [(q(0), u, Decision::Indifferent), (q(0), u, Decision::Indifferent)];
    let amounts: Vec<Rational> = [10, 20, 40, 80].map(q).to_vec();
    let mean = amounts.iter().sum::<Rational>() / q(4);
    vec![
        (Scenario::TwoFixedClosed, indiff(x)),
        (
            Scenario::TwoFixedNClosed {
                n: 4,
                base: q(10),
                marginal: MarginalInfo::NoInfo,
            },
            indiff(Units::Euros),
        ),
        (
            Scenario::TwoFixedOpened {
                revealed_holder: Player::A,
                revealed: q(100),
            },
            indiff(Units::SuccessFactor),
        ),
        (
            Scenario::TwoFixedBothOpened {
                amount_a: q(100),
                amount_b: q(200),
            },
            indiff(Units::SuccessFactor),
        ),
        (
            Scenario::OneFixedClosed,
            [
                (Rational::new(1, 4), x, Decision::Trade),
                (Rational::new(-1, 4), x, Decision::Keep),
            ],
        ),
        (
            Scenario::OneFixedNClosed {
                amounts,
                marginal: MarginalInfo::NoInfo,
            },
            [
                (mean / q(4), Units::Euros, Decision::Trade),
                (-mean / q(4), Units::Euros, Decision::Keep),
            ],
        ),
        (
            Scenario::OneFixedOpenedA { amount_a: q(100) },
            [
                (q(25), Units::Euros, Decision::Trade),
                (q(-25), Units::Euros, Decision::Keep),
            ],
        ),
        (
            Scenario::OneFixedOpenedB { amount_b: q(100) },
            [
                (Rational::new(1, 4), x, Decision::Trade),
                (Rational::new(-1, 4), x, Decision::Keep),
            ],
        ),
        (
            Scenario::OneFixedBothOpened {
                amount_a: q(100),
                amount_b: q(200),
            },
            [
                (q(25), Units::Euros, Decision::Trade),
                (Rational::new(-1, 4), x, Decision::Keep),
            ],
        ),
    ]
}

fn criterion_1() -> Check {
    let start = Instant::now();
    for (s, want) in summary_scenarios() {
        for (p, (v, u, d)) in Player::BOTH.into_iter().zip(want) {
            expect_ev(&analyze(&s, p)?, v, u, d)?;
        }
    }
    for (observer, amount) in [(Player::A, 200), (Player::B, 100)] {
        let s = Scenario::BoundedLadder {
            min: q(50),
            levels: 6,
            observed: Some((observer, q(amount))),
        };
        expect_ev(&analyze(&s, observer)?, q(-amount / 2), Units::Euros, Decision::Keep)?;
    }
    let rows = summary_rows().map_err(|e| e.to_string())?;
    let symbols: Vec<(&str, &str, &str, &str, &str)> = rows
        .iter()
        .map(|r| {
            (
                r.variation.as_str(),
                r.e_a.as_str(),
                r.e_b.as_str(),
                r.decision_a.as_str(),
                r.decision_b.as_str(),
            )
        })
        .collect();
    let expected = [
        ("1.1", "0", "0", "Indifferent", "Indifferent"),
        ("1.2", "0", "0", "Indifferent", "Indifferent"),
        ("1.3", "0", "0", "Indifferent", "Indifferent"),
        ("1.4", "0", "0", "Indifferent", "Indifferent"),
        ("2.1", "+X/4", "-X/4", "Trade", "Keep"),
        ("2.2", "+<a>/4", "-<a>/4", "Trade", "Keep"),
        ("2.3", "+A/4", "-A/4", "Trade", "Keep"),
        ("2.4", "+X/4", "-X/4", "Trade", "Keep"),
        ("2.5", "+A/4", "-X/4", "Trade", "Keep"),
        ("3", "-A/2", "-B/2", "Keep", "Keep"),
    ];
    ensure(symbols == expected, || format!("summary rows differ: {symbols:?}"))?;
    let formulas_23 = &rows[6].formulas;
    ensure(formulas_23 == "2.3.1 - 2.3.2", || format!("2.3 formulas {formulas_23}"))?;
    within(start.elapsed(), FAST_LIMIT)?;
    Ok(format!("10 summary rows exact in {:?}", start.elapsed()))
}

fn criterion_2() -> Check {
    let x = Units::FractionOf(AmountRef::PlayerAFixedAmount);
    let e = |r: envlab::Result<ExactAnalysis>| r.map_err(|e| e.to_string());
    let cases = [
        (
            fallacy_naive_quarter::<Rational>(Player::A),
            Rational::new(1, 4),
            x,
            "1.1.2",
        ),
        (e(fallacy_opened_unweighted(q(100)))?, q(25), Units::Euros, "1.3.3"),
        (
            e(fallacy_opened_b_unweighted(q(100), Player::A))?,
            q(-25),
            Units::Euros,
            "2.4.3",
        ),
        (
            e(fallacy_opened_b_unweighted(q(100), Player::B))?,
            q(25),
            Units::Euros,
            "2.4.4",
        ),
        (
            e(fallacy_opened_b_quarter_mix(q(100), Player::A))?,
            Rational::new(125, 4),
            Units::Euros,
            "2.4.5",
        ),
    ];
    for (r, value, units, id) in &cases {
        ensure(
            r.is_fallacy && r.formula_id == *id && r.ev == ExactReturn::new(*value, *units),
            || {
                format!(
                    "{id}: got {} {} fallacy={} id={}",
                    r.ev.value, r.ev.units, r.is_fallacy, r.formula_id
                )
            },
        )?;
    }
    Ok("5 flagged fallacies exact".into())
}

fn random_lists() -> Vec<Vec<Rational>> {
    let mut rng = StdRng::seed_from_u64(MC_SEED);
    (0..RANDOM_LISTS)
        .map(|_| {
            let len = rng.random_range(2..=8);
            let mut set = std::collections::BTreeSet::new();
            while set.len() < len {
                set.insert(Rational::new(rng.random_range(1..10_000), rng.random_range(1..=4)));
            }
            set.into_iter().collect()
        })
        .collect()
}

fn criterion_3() -> Check {
    let start = Instant::now();
    let err = |e: envlab::Error| e.to_string();
    for n in 3..=8 {
        for base in [q(10), q(50)] {
            let full = build_two_fixed_table(n, base).map_err(err)?;
            let ev = table_ev(&full, Player::A).value;
            ensure(ev == q(0), || format!("n={n} base={base}: full EV {ev}"))?;

            let s1 = filter_marginal(&full, MarginalInfo::ANonMarginal).map_err(err)?;
            let inner = full.inner_mean_amount().ok_or("no inner amounts")?;
            let (a, b) = (table_ev(&s1, Player::A).value, table_ev(&s1, Player::B).value);
            ensure(a == inner / q(4) && b == -inner / q(4), || {
                format!("n={n} base={base}: subcase 1 ({a}, {b})")
            })?;

            let s2 = filter_marginal(&full, MarginalInfo::BothNonMarginal);
            match (n, s2) {
                (3, Err(envlab::Error::DegenerateScenario(_))) => {}
                (3, other) => return Err(format!("n=3 subcase 2 should be degenerate, got {other:?}")),
                (_, Ok(t)) => {
                    let ev = table_ev(&t, Player::A).value;
                    ensure(ev == q(0), || format!("n={n} base={base}: subcase 2 EV {ev}"))?;
                }
                (_, Err(e)) => return Err(e.to_string()),
            }
        }
    }
    for list in random_lists() {
        let t = build_one_fixed_table(&list).map_err(err)?;
        let quarter = t.mean_amount() / q(4);
        let (a, b) = (table_ev(&t, Player::A).value, table_ev(&t, Player::B).value);
        ensure(a == quarter && b == -quarter, || {
            format!("{list:?}: ({a}, {b}) vs {quarter}")
        })?;
    }
    within(start.elapsed(), FAST_LIMIT)?;
    Ok(format!(
        "12 ladders and {RANDOM_LISTS} random lists exact in {:?}",
        start.elapsed()
    ))
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let spec = LadderSpec::new(q(50), 6).map_err(|e| e.to_string())?;
    let (policy, _) = solve_ladder(&spec);
    ensure(policy.as_slice() == [true, false, false, false, false, false], || {
        format!("policy {:?}", policy.as_slice())
    })?;
    let s = Scenario::BoundedLadder {
        min: q(50),
        levels: 6,
        observed: Some((Player::B, q(100))),
    };
    expect_ev(&analyze(&s, Player::B)?, q(-50), Units::Euros, Decision::Keep)?;
    let cond = conditional_exchange_ev(&spec, &q(100), Player::B).map_err(|e| e.to_string())?;
    ensure(cond.value_if_accepted().value == q(-50), || {
        format!("conditional EV {:?}", cond)
    })?;
    for levels in 2..=12 {
        let (p, _) = solve_ladder(&LadderSpec::new(q(50), levels).map_err(|e| e.to_string())?);
        let shape: Vec<bool> = (0..levels).map(|l| l == 0).collect();
        ensure(p.as_slice() == shape, || format!("levels={levels}: {:?}", p.as_slice()))?;
    }
    within(start.elapsed(), FAST_LIMIT)?;
    Ok(format!(
        "policy and -50 at 100 exact, shape holds for 2..=12 levels in {:?}",
        start.elapsed()
    ))
}

fn monte_carlo_scenarios() -> Vec<ExactScenario> {
    let mut out: Vec<ExactScenario> = summary_scenarios().into_iter().map(|(s, _)| s).collect();
    for n in 3..=8 {
        for base in [q(10), q(50)] {
            for marginal in [
                MarginalInfo::NoInfo,
                MarginalInfo::ANonMarginal,
                MarginalInfo::BothNonMarginal,
            ] {
                if n == 3 && marginal == MarginalInfo::BothNonMarginal {
                    continue;
                }
                out.push(Scenario::TwoFixedNClosed { n, base, marginal });
            }
        }
    }
    out.extend(random_lists().into_iter().map(|amounts| Scenario::OneFixedNClosed {
        amounts,
        marginal: MarginalInfo::NoInfo,
    }));
    out
}

fn criterion_5() -> Check {
    let start = Instant::now();
    let mut count = 0;
    let mut worst: f64 = 0.0;
    for (i, s) in monte_carlo_scenarios().into_iter().enumerate() {
        for p in Player::BOTH {
            let cfg = SimulationConfig::new(s.clone(), p, MC_TRIALS, MC_SEED + 2 * i as u64);
            let v = verify(&cfg, Z_LIMIT).map_err(|e| format!("{s} for {p}: {e}"))?;
            for e in &v.experiments {
                worst = worst.max(e.result.z_score.unwrap_or(0.0).abs());
            }
            ensure(v.passed, || {
                let zs: Vec<_> = v
                    .experiments
                    .iter()
                    .map(|e| (e.result.mean, e.result.z_score))
                    .collect();
                format!("{s} for {p} ({} {}): {zs:?}", v.claim.ev.value, v.claim.ev.units)
            })?;
            count += 1;
        }
    }

    // Rejection loop for B non-marginal over a doubling ladder against the conditioned table.
    let amounts: Vec<Rational> = [50, 100, 200, 400, 800, 1600].map(q).to_vec();
    let scenario = Scenario::OneFixedNClosed {
        amounts: amounts.clone(),
        marginal: MarginalInfo::BNonMarginal,
    };
    let table = filter_marginal(
        &build_one_fixed_table(&amounts).map_err(|e| e.to_string())?,
        MarginalInfo::BNonMarginal,
    )
    .map_err(|e| e.to_string())?;
    let freqs = event_frequencies(&SimulationConfig::new(scenario, Player::A, MC_TRIALS, MC_SEED))
        .map_err(|e| e.to_string())?;
    ensure(freqs.len() == table.len(), || {
        format!("{} sampled deals, {} table rows", freqs.len(), table.len())
    })?;
    let p = 1.0 / table.len() as f64;
    let n = MC_TRIALS as f64;
    for (f, e) in freqs.iter().zip(&table.events) {
        let want = (envlab::Scalar::approx(&e.amount_a), envlab::Scalar::approx(&e.amount_b));
        ensure((f.amount_a, f.amount_b) == want, || {
            format!("deal {:?} not in table order {:?}", (f.amount_a, f.amount_b), want)
        })?;
        let z = (f.count as f64 - n * p) / (n * p * (1.0 - p)).sqrt();
        worst = worst.max(z.abs());
        ensure(z.abs() <= Z_LIMIT, || {
            format!("deal {want:?}: count {} z {z:.2}", f.count)
        })?;
    }
    within(start.elapsed(), MC_LIMIT)?;
    Ok(format!(
        "{count} verifications and {} rejection frequencies, max |z| {worst:.2}, in {:?}",
        freqs.len(),
        start.elapsed()
    ))
}

fn criterion_6() -> Check {
    let claim = fallacy_opened_b_unweighted(q(100), Player::B).map_err(|e| e.to_string())?;
    let opts = envlab::montecarlo::VerifyOptions {
        trials: MC_TRIALS,
        seed: MC_SEED,
        threshold: Z_LIMIT,
        workers: None,
    };
    let v = envlab::montecarlo::verify_claim(&claim, opts).map_err(|e| e.to_string())?;
    let zs: Vec<String> = v
        .experiments
        .iter()
        .map(|e| {
            format!(
                "{}: mean {:.3} z {:.1}",
                e.label,
                e.result.mean,
                e.result.z_score.unwrap_or(0.0)
            )
        })
        .collect();
    let all_far = v
        .experiments
        .iter()
        .all(|e| e.result.z_score.is_some_and(|z| z.abs() > Z_LIMIT));
    ensure(!v.passed && all_far, || format!("claim not falsified: {zs:?}"))?;
    Ok(format!("+25 for B rejected ({})", zs.join("; ")))
}

fn criterion_7() -> Check {
    let bin = env!("CARGO_BIN_EXE_envlab");
    let cases: [&[&str]; 3] = [
        &[
            "--variant",
            "one-fixed-closed",
            "--measure",
            "fraction-of-a-fixed",
            "--verify",
        ],
        &[
            "--variant",
            "one-fixed-n-closed",
            "--amounts",
            "10,20,40,80",
            "--marginal-info",
            "b-non-marginal",
        ],
        &[
            "--variant",
            "one-fixed-opened-b",
            "--revealed",
            "100",
            "--player",
            "B",
            "--verify",
            "--claim",
            "2.4.4",
            "--measure",
            "euro-return",
        ],
    ];
    for case in cases {
        let mut outputs = Vec::new();
        for workers in ["1", "2", "4", "8", "1"] {
            let out = Command::new(bin)
                .args(["simulate", "--trials", "300000", "--seed", "42", "--workers", workers])
                .args(case)
                .output()
                .map_err(|e| e.to_string())?;
            ensure(!out.stdout.is_empty(), || {
                String::from_utf8_lossy(&out.stderr).into_owned()
            })?;
            outputs.push(out.stdout);
        }
        ensure(outputs.windows(2).all(|w| w[0] == w[1]), || {
            format!("output differs across workers for {case:?}")
        })?;
    }
    Ok("3 simulate invocations byte-identical over 1, 2, 4 and 8 workers".into())
}

fn random_scenario(rng: &mut StdRng) -> ExactScenario {
    let amount = |rng: &mut StdRng| Rational::new(rng.random_range(1..2000), rng.random_range(1..=8));
    let player = |rng: &mut StdRng| if rng.random_bool(0.5) { Player::A } else { Player::B };
    let info = |rng: &mut StdRng| {
        [
            MarginalInfo::NoInfo,
            MarginalInfo::ANonMarginal,
            MarginalInfo::BNonMarginal,
            MarginalInfo::BothNonMarginal,
        ][rng.random_range(0..4)]
    };
    match rng.random_range(0..10) {
        0 => Scenario::TwoFixedClosed,
        1 => Scenario::TwoFixedNClosed {
            n: rng.random_range(4..10),
            base: amount(rng),
            marginal: info(rng),
        },
        2 => Scenario::TwoFixedOpened {
            revealed_holder: player(rng),
            revealed: amount(rng),
        },
        3 | 8 => {
            let a = amount(rng);
            let b = if rng.random_bool(0.5) { a * q(2) } else { a / q(2) };
            if rng.random_bool(0.5) {
                Scenario::TwoFixedBothOpened {
                    amount_a: a,
                    amount_b: b,
                }
            } else {
                Scenario::OneFixedBothOpened {
                    amount_a: a,
                    amount_b: b,
                }
            }
        }
        4 => Scenario::OneFixedClosed,
        5 => {
            let mut amounts: Vec<Rational> = (0..rng.random_range(1..8)).map(|_| amount(rng)).collect();
            amounts.sort();
            amounts.dedup();
            Scenario::OneFixedNClosed {
                amounts,
                marginal: MarginalInfo::NoInfo,
            }
        }
        6 => Scenario::OneFixedOpenedA { amount_a: amount(rng) },
        _ => Scenario::OneFixedOpenedB { amount_b: amount(rng) },
    }
}

fn scaled(s: &ExactScenario, c: Rational) -> ExactScenario {
    match s.clone() {
        Scenario::TwoFixedNClosed { n, base, marginal } => Scenario::TwoFixedNClosed {
            n,
            base: base * c,
            marginal,
        },
        Scenario::TwoFixedOpened {
            revealed_holder,
            revealed,
        } => Scenario::TwoFixedOpened {
            revealed_holder,
            revealed: revealed * c,
        },
        Scenario::TwoFixedBothOpened { amount_a, amount_b } => Scenario::TwoFixedBothOpened {
            amount_a: amount_a * c,
            amount_b: amount_b * c,
        },
        Scenario::OneFixedNClosed { amounts, marginal } => Scenario::OneFixedNClosed {
            amounts: amounts.into_iter().map(|a| a * c).collect(),
            marginal,
        },
        Scenario::OneFixedOpenedA { amount_a } => Scenario::OneFixedOpenedA { amount_a: amount_a * c },
        Scenario::OneFixedOpenedB { amount_b } => Scenario::OneFixedOpenedB { amount_b: amount_b * c },
        Scenario::OneFixedBothOpened { amount_a, amount_b } => Scenario::OneFixedBothOpened {
            amount_a: amount_a * c,
            amount_b: amount_b * c,
        },
        other => other,
    }
}

fn criterion_8() -> Check {
    let mut rng = StdRng::seed_from_u64(MC_SEED ^ 0x5eed);
    let (mut antisym, mut scale, mut pairs, mut trials) = (0, 0, 0, 0);
    for _ in 0..PROPERTY_CASES {
        let s = random_scenario(&mut rng);
        let (a, b) = (analyze(&s, Player::A)?, analyze(&s, Player::B)?);
        if a.ev.units == b.ev.units {
            ensure(a.ev.value == -b.ev.value && a.decision == b.decision.flip(), || {
                format!("{s}: A {:?} B {:?}", a.ev, b.ev)
            })?;
            antisym += 1;
        }

        let c = Rational::new(rng.random_range(1..50), rng.random_range(1..=5));
        let t = scaled(&s, c);
        for (base, big) in [(&a, analyze(&t, Player::A)?), (&b, analyze(&t, Player::B)?)] {
            let want = if base.ev.units == Units::Euros {
                base.ev.value * c
            } else {
                base.ev.value
            };
            ensure(
                big.ev == ExactReturn::new(want, base.ev.units) && big.decision == base.decision,
                || format!("{s} scaled by {c}: {:?} vs {:?}", base.ev, big.ev),
            )?;
        }
        scale += 1;

        for trial in 0..5u64 {
            let perspective = if trial % 2 == 0 { Player::A } else { Player::B };
            let deal = sample_deal(&s, perspective, MC_SEED, trial).map_err(|e| format!("{s}: {e}"))?;
            ensure(deal.return_for(Player::A) + deal.return_for(Player::B) == 0.0, || {
                format!("{s}: {deal:?}")
            })?;
            trials += 1;
        }
    }
    for _ in 0..PROPERTY_CASES {
        let n = rng.random_range(3..12);
        let base = Rational::new(rng.random_range(1..1000), rng.random_range(1..=8));
        let t = build_two_fixed_table(n, base).map_err(|e| e.to_string())?;
        for e in &t.events {
            let mirror = t
                .events
                .iter()
                .filter(|m| m.amount_a == e.amount_b && m.amount_b == e.amount_a)
                .count();
            let opposite = t
                .events
                .iter()
                .any(|m| m.amount_a == e.amount_b && m.return_for_a == -e.return_for_a);
            ensure(mirror == 1 && opposite, || {
                format!("n={n} base={base}: {e:?} has no cancelling row")
            })?;
        }
        ensure(table_ev(&t, Player::A).value == q(0), || {
            format!("n={n} base={base}: nonzero total")
        })?;
        pairs += 1;
    }
    let min = [antisym, scale, pairs, trials].into_iter().min().unwrap_or(0);
    ensure(min >= 100, || format!("only {min} cases for one property"))?;
    Ok(format!(
        "antisymmetry {antisym}, scaling {scale}, pairwise cancellation {pairs}, per-trial zero-sum {trials} cases"
    ))
}

fn main() {
    #[allow(clippy::type_complexity)]
    let criteria: [(&str, fn() -> Check); 8] = [
        ("1 summary table reproduced exactly", criterion_1),
        ("2 fallacy catalog", criterion_2),
        ("3 table identities", criterion_3),
        ("4 bounded ladder", criterion_4),
        ("5 Monte Carlo oracle", criterion_5),
        ("6 fallacy falsified by simulation", criterion_6),
        ("7 determinism across workers", criterion_7),
        ("8 property suite", criterion_8),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
