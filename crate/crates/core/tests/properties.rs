use envlab::tables::{build_one_fixed_table, build_two_fixed_table, filter_marginal, table_ev, total_return};
use envlab::{analyze_scenario, MarginalInfo, Player, Rational, Scenario, Units};
use proptest::prelude::*;

fn amount() -> impl Strategy<Value = Rational> {
    (1i128..500, 1i128..8).prop_map(|(n, d)| Rational::new(n, d))
}

fn scenarios() -> impl Strategy<Value = Scenario<Rational>> {
    let info = prop_oneof![
        Just(MarginalInfo::NoInfo),
        Just(MarginalInfo::ANonMarginal),
        Just(MarginalInfo::BNonMarginal),
        Just(MarginalInfo::BothNonMarginal),
    ];
    prop_oneof![
        Just(Scenario::TwoFixedClosed),
        Just(Scenario::OneFixedClosed),
        (amount(), any::<bool>()).prop_map(|(revealed, a)| Scenario::TwoFixedOpened {
            revealed_holder: if a { Player::A } else { Player::B },
            revealed,
        }),
        (amount(), any::<bool>()).prop_map(|(x, double)| {
            let y = if double {
                x * Rational::from_integer(2)
            } else {
                x / Rational::from_integer(2)
            };
            Scenario::TwoFixedBothOpened {
                amount_a: x,
                amount_b: y,
            }
        }),
        amount().prop_map(|amount_a| Scenario::OneFixedOpenedA { amount_a }),
        amount().prop_map(|amount_b| Scenario::OneFixedOpenedB { amount_b }),
        (4usize..9, amount(), info).prop_map(|(n, base, marginal)| Scenario::TwoFixedNClosed { n, base, marginal }),
        prop::collection::btree_set(1i128..400, 1..7).prop_map(|set| Scenario::OneFixedNClosed {
            amounts: set.into_iter().map(Rational::from_integer).collect(),
            marginal: MarginalInfo::NoInfo,
        }),
    ]
}

fn scaled(s: &Scenario<Rational>, c: Rational) -> Scenario<Rational> {
    match s.clone() {
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
        Scenario::OneFixedOpenedA { amount_a } => Scenario::OneFixedOpenedA { amount_a: amount_a * c },
        Scenario::OneFixedOpenedB { amount_b } => Scenario::OneFixedOpenedB { amount_b: amount_b * c },
        Scenario::TwoFixedNClosed { n, base, marginal } => Scenario::TwoFixedNClosed {
            n,
            base: base * c,
            marginal,
        },
        Scenario::OneFixedNClosed { amounts, marginal } => Scenario::OneFixedNClosed {
            amounts: amounts.into_iter().map(|a| a * c).collect(),
            marginal,
        },
        other => other,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn zero_sum_antisymmetry(s in scenarios()) {
        let a = analyze_scenario(&s, Player::A);
        let b = analyze_scenario(&s, Player::B);
        if let (Ok(a), Ok(b)) = (a, b) {
            if a.ev.units == b.ev.units {
                prop_assert_eq!(a.ev.value, -b.ev.value);
                prop_assert_eq!(a.decision, b.decision.flip());
            }
        }
    }

    #[test]
    fn scale_equivariance(s in scenarios(), c in amount()) {
        let t = scaled(&s, c);
        for p in Player::BOTH {
            let (Ok(base), Ok(big)) = (analyze_scenario(&s, p), analyze_scenario(&t, p)) else { continue };
            prop_assert_eq!(base.ev.units, big.ev.units);
            prop_assert_eq!(base.decision, big.decision);
            match base.ev.units {
                Units::Euros => prop_assert_eq!(base.ev.value * c, big.ev.value),
                _ => prop_assert_eq!(base.ev.value, big.ev.value),
            }
        }
    }

    #[test]
    fn full_two_fixed_table_cancels_in_pairs(n in 3usize..12, base in amount()) {
        let t = build_two_fixed_table(n, base).unwrap();
        prop_assert_eq!(t.len(), 2 * n - 2);
        prop_assert_eq!(total_return(&t), Rational::from_integer(0));
        let mut returns: Vec<Rational> = t.events.iter().map(|e| e.return_for_a).collect();
        returns.sort();
        let mut negated: Vec<Rational> = returns.iter().map(|r| -*r).collect();
        negated.sort();
        prop_assert_eq!(returns, negated);
        let mut col_a: Vec<Rational> = t.events.iter().map(|e| e.amount_a).collect();
        let mut col_b: Vec<Rational> = t.events.iter().map(|e| e.amount_b).collect();
        col_a.sort();
        col_b.sort();
        prop_assert_eq!(col_a, col_b);
    }

    #[test]
    fn table_ev_antisymmetric(n in 4usize..10, base in amount(), which in 0usize..4) {
        let info = [MarginalInfo::NoInfo, MarginalInfo::ANonMarginal, MarginalInfo::BNonMarginal, MarginalInfo::BothNonMarginal][which];
        let t = filter_marginal(&build_two_fixed_table(n, base).unwrap(), info).unwrap();
        prop_assert_eq!(table_ev(&t, Player::A).value, -table_ev(&t, Player::B).value);
    }

    #[test]
    fn one_fixed_table_is_quarter_of_mean(set in prop::collection::btree_set(1i128..10_000, 1..30)) {
        let amounts: Vec<Rational> = set.into_iter().map(|a| Rational::new(a, 3)).collect();
        let t = build_one_fixed_table(&amounts).unwrap();
        let mean = amounts.iter().sum::<Rational>() / Rational::from_integer(amounts.len() as i128);
        prop_assert_eq!(table_ev(&t, Player::A).value, mean / Rational::from_integer(4));
        prop_assert_eq!(t.len(), 2 * amounts.len());
    }

    #[test]
    fn filtering_is_conditioning(n in 4usize..10, base in amount(), which in 1usize..4) {
        let info = [MarginalInfo::NoInfo, MarginalInfo::ANonMarginal, MarginalInfo::BNonMarginal, MarginalInfo::BothNonMarginal][which];
        let full = build_two_fixed_table(n, base).unwrap();
        let filtered = filter_marginal(&full, info).unwrap();
        let inner = full.inner_amounts().to_vec();
        let keep = |a: &Rational, b: &Rational| {
            (!info.excludes_a() || inner.contains(a)) && (!info.excludes_b() || inner.contains(b))
        };
        let (mass, weighted) = full.events.iter().filter(|e| keep(&e.amount_a, &e.amount_b)).fold(
            (Rational::from_integer(0), Rational::from_integer(0)),
            |(m, w), e| (m + full.probability_per_event, w + full.probability_per_event * e.return_for_a),
        );
        prop_assert_eq!(table_ev(&filtered, Player::A).value, weighted / mass);
    }
}
