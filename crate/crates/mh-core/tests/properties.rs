//! Cross-module invariants: the algebraic identities behind the mutation
//! dynamics, asserted to exact-rational equality wherever they are exact.

use mh_core::*;
use proptest::prelude::*;
use rug::ops::Pow;
use std::collections::BTreeSet;

fn grids() -> Vec<Equation> {
    [
        &[0u64, 0, 0][..],
        &[1, 1, 1],
        &[0, 1, 2],
        &[0, 0, 0, 0],
        &[0, 1, 2, 3],
    ]
    .iter()
    .map(|l| Equation::markov_hurwitz_u64(l).unwrap())
    .collect()
}

#[test]
fn involution_closure_and_mutate_to_max_on_enumerated_solutions() {
    for eq in grids() {
        let sols = solutions_upto(&eq, &Integer::from(2000), 1 << 20).unwrap();
        assert!(!sols.is_empty());
        for x in &sols {
            let argmax = x.argmax();
            for i in 1..=eq.n() {
                let y = eq.mutate(x, i).unwrap();
                // closure
                assert_eq!(eq.residual(&y).unwrap(), 0u32);
                // involution
                assert_eq!(eq.mutate(&y, i).unwrap(), *x);
                // product identity: x_i * y_i = sum of other squares + lambda_i * prod
                let mut rhs = Integer::new();
                let mut prod = Integer::from(1u32);
                for (j, c) in x.coords().iter().enumerate() {
                    if j != i - 1 {
                        rhs += Integer::from(c.square_ref());
                        prod *= c;
                    }
                }
                rhs += eq.lambda()[i - 1].clone() * prod;
                rhs -= eq.b();
                assert_eq!(
                    Integer::from(&x.coords()[i - 1] * &y.coords()[i - 1]),
                    rhs
                );
                // sum identity via the division-free route
                assert_eq!(
                    Integer::from(&x.coords()[i - 1] + &y.coords()[i - 1]),
                    eq.vieta_sum(x, i).unwrap()
                );
                // mutate-to-max
                if i != argmax && !x.is_all_ones() {
                    assert_eq!(y.argmax(), i, "eq {eq}, x {x}, direction {i}");
                    let (_, tie) = y.argmax_with_tie();
                    assert!(!tie, "new maximum must be strict");
                }
            }
        }
    }
}

#[test]
fn enumeration_agrees_with_brute_force_oracle() {
    let eq = Equation::markov_hurwitz_u64(&[1, 2, 3]).unwrap();
    let fast = solutions_upto(&eq, &Integer::from(15), 1 << 20).unwrap();
    let brute = brute_force_solutions(&eq, 15).unwrap();
    assert_eq!(fast, brute);

    let eq = Equation::markov_hurwitz_u64(&[0, 0, 0, 0]).unwrap();
    let fast = solutions_upto(&eq, &Integer::from(12), 1 << 20).unwrap();
    let brute = brute_force_solutions(&eq, 12).unwrap();
    assert_eq!(fast, brute);
}

#[test]
fn descent_terminates_with_strict_decrease_and_reconstructs() {
    let limits = Limits::default();
    for eq in grids() {
        for seed in 0..40u64 {
            let word = MutationWord::seeded_random(eq.n(), (seed % 13) as usize, seed);
            let chain = eq
                .apply_word(&SolutionTuple::ones(eq.n()), &word, &limits)
                .unwrap();
            let endpoint = chain.last().unwrap().clone();
            let descent = eq.descend(&endpoint, &limits).unwrap();
            assert!(descent.terminal().is_all_ones());
            assert_eq!(descent.tie_count, 0);
            for pair in descent.chain.windows(2) {
                assert!(pair[1].max_coord() < pair[0].max_coord());
            }
            let rebuilt = eq
                .apply_word(descent.terminal(), &descent.word.reversed(), &limits)
                .unwrap();
            assert_eq!(rebuilt.last().unwrap(), &endpoint);
        }
    }
}

#[test]
fn ratio_sequence_monotone_and_bounded_on_random_words() {
    let limits = Limits::default();
    for eq in grids() {
        let k_lambda = Rational::from(eq.k_lambda());
        for seed in [1u64, 7, 42] {
            let word = MutationWord::seeded_random(eq.n(), 14, seed);
            let seq = ratio_sequence(&eq, &word, &limits).unwrap();
            for pair in seq.values.windows(2) {
                assert!(pair[1] > pair[0]);
            }
            for k in &seq.values {
                assert!(*k > 0u32 && *k <= k_lambda);
            }
        }
    }
}

/// Drives an l-chain, its classical x-chain, and the shift-free auxiliary
/// chain together, checking the exact identities from the boundedness proof.
fn check_u_exactness(n: usize, k: Rational, seed: u64, len: usize) {
    let word = MutationWord::seeded_random(n, len, seed);
    let schedule = DeformationSchedule::constant(k.clone()).unwrap();
    let x0 = EuclidPoint::ones(n);
    let y0 = EuclidPoint::ones(n);
    let xs = euclid_chain(&x0, &word, &DeformationSchedule::classical()).unwrap();
    let ys = euclid_chain(&y0, &word, &schedule).unwrap();

    let mut l = comparison_tuple(&y0, &x0).unwrap();
    let mut u = auxiliary_tuple(&l, &x0, &k).unwrap();
    let zero = Rational::new();
    for (t, &dir) in word.labels().iter().enumerate() {
        let x_before = &xs.points[t];
        l = comparison_mutate(&l, x_before, dir, &k).unwrap();
        u = comparison_mutate(&u, x_before, dir, &zero).unwrap();
        // the k=0-evolved u equals the auxiliary of the evolved l, exactly
        let direct_u = auxiliary_tuple(&l, &xs.points[t + 1], &k).unwrap();
        assert_eq!(u, direct_u, "u-rule mismatch at step {t}");
        // and l matches the direct quotient of the two chains
        let direct_l = comparison_tuple(&ys.points[t + 1], &xs.points[t + 1]).unwrap();
        assert_eq!(l, direct_l, "consistency mismatch at step {t}");
        // boundedness: l sits below u, and u never leaves its initial hull
        for (lj, uj) in l.values().iter().zip(u.values()) {
            assert!(lj <= uj);
        }
    }
}

#[test]
fn auxiliary_chain_follows_shift_free_rule_exactly() {
    for n in [3usize, 4, 5] {
        for k in [Rational::from(1u32), Rational::from(3u32), Rational::from((7u64, 2u64))] {
            check_u_exactness(n, k, 1000 + n as u64, 60);
        }
    }
}

#[test]
fn interval_nesting_for_shift_free_chains() {
    // two classical chains from different starts: total intervals nest
    let n = 4;
    let word = MutationWord::seeded_random(n, 120, 5);
    let x0 = EuclidPoint::ones(n);
    let y0 = EuclidPoint::from_u64s(&[2, 1, 1, 1]).unwrap();
    let xs = euclid_chain(&x0, &word, &DeformationSchedule::classical()).unwrap();
    let mut l = comparison_tuple(&y0, &x0).unwrap();
    let mut previous = total_interval(&l);
    let zero = Rational::new();
    for (t, &dir) in word.labels().iter().enumerate() {
        l = comparison_mutate(&l, &xs.points[t], dir, &zero).unwrap();
        let current = total_interval(&l);
        assert!(
            previous.contains(&current),
            "nesting violated at step {t}: {previous} then {current}"
        );
        previous = current;
    }
    assert!(previous.length() < (1u64, 1_000_000u64));
}

#[test]
fn boundedness_of_comparison_points_constant_shift() {
    let n = 4;
    let k = Rational::from(3u32);
    let word = MutationWord::seeded_random(n, 150, 9);
    let x0 = EuclidPoint::ones(n);
    let xs = euclid_chain(&x0, &word, &DeformationSchedule::classical()).unwrap();
    let l0 = ComparisonTuple::constant(n, 1u32);
    let u0 = auxiliary_tuple(&l0, &x0, &k).unwrap();
    let hull_hi = u0.max().clone();
    let widening = k.clone() / Rational::from(n as u64 - 2);
    let hull_lo = Rational::from(u0.min() - &widening);

    let mut l = l0;
    for (t, &dir) in word.labels().iter().enumerate() {
        l = comparison_mutate(&l, &xs.points[t], dir, &k).unwrap();
        assert!(l.max() <= &hull_hi, "upper hull violated at step {t}");
        assert!(l.min() >= &hull_lo, "lower hull violated at step {t}");
    }
}

#[test]
fn sandwich_for_varying_shift() {
    let n = 3;
    // shifts wander inside [1, 2]
    let len = 100usize;
    let ks: Vec<Rational> = (0..len)
        .map(|t| Rational::from((t as u64 % 3 + 2, 2u64)))
        .collect();
    let schedule = DeformationSchedule::sequence(ks.clone()).unwrap();
    let k_a = schedule.k_a().clone();
    let k_c = schedule.k_c().clone();
    assert!(k_a < k_c);

    let word = MutationWord::seeded_random(n, len, 11);
    let x0 = EuclidPoint::ones(n);
    let xs = euclid_chain(&x0, &word, &DeformationSchedule::classical()).unwrap();

    let l0 = ComparisonTuple::constant(n, 1u32);
    let envelope = envelope_tuples(&l0, &x0, &k_a, &k_c).unwrap();
    let mut l = l0.clone();
    let mut lower = envelope.lower;
    let mut upper = envelope.upper;
    let mut upper_aux = envelope.upper_aux;
    let zero = Rational::new();

    let n_minus_2 = Rational::from(n as u64 - 2);
    for (t, &dir) in word.labels().iter().enumerate() {
        let x_before = &xs.points[t];
        l = comparison_mutate(&l, x_before, dir, &ks[t]).unwrap();
        lower = comparison_mutate(&lower, x_before, dir, &k_a).unwrap();
        upper = comparison_mutate(&upper, x_before, dir, &k_c).unwrap();
        upper_aux = comparison_mutate(&upper_aux, x_before, dir, &zero).unwrap();
        let x_now = &xs.points[t + 1];
        for j in 0..n {
            // companion chains sandwich the varying chain
            assert!(lower.values()[j] <= l.values()[j], "lower sandwich, step {t}");
            assert!(l.values()[j] <= upper.values()[j], "upper sandwich, step {t}");
            // the k_c-auxiliary dominates the varying chain with margin
            let margin = Rational::from(&k_c / &Rational::from(&n_minus_2 * &x_now.coords()[j]));
            assert!(
                upper_aux.values()[j] >= Rational::from(&l.values()[j] + &margin),
                "auxiliary domination failed at step {t} coordinate {j}"
            );
        }
    }
}

#[test]
fn descent_tie_diagnostics_for_degenerate_lambda() {
    // symmetric equation: ties can only appear at the root, which carries no
    // diagnostic
    let eq = Equation::markov_hurwitz_u64(&[0, 0, 0]).unwrap();
    let limits = Limits::default();
    let sols = solutions_upto(&eq, &Integer::from(100), 1 << 20).unwrap();
    for x in &sols {
        let d = eq.descend(x, &limits).unwrap();
        assert_eq!(d.tie_count, 0, "unexpected argmax tie descending from {x}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn solution_tuple_json_round_trip(raw in prop::collection::vec((1u128..=u128::MAX, 0u32..200), 3..6)) {
        let coords: Vec<Integer> = raw
            .iter()
            .map(|(base, shift)| Integer::from(*base) << *shift)
            .collect();
        let tuple = SolutionTuple::new(coords).unwrap();
        let text = serde_json::to_string(&tuple).unwrap();
        let back: SolutionTuple = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, tuple);
    }

    #[test]
    fn big_log_is_multiplicative(a in 3u128..=u128::MAX, b in 3u128..=u128::MAX, sa in 0u32..5000, sb in 0u32..5000) {
        // ln(x*y) = ln x + ln y exactly; the implementation must respect it
        // within its stated relative error
        let x = Integer::from(a) << sa;
        let y = Integer::from(b) << sb;
        let product = Integer::from(&x * &y);
        let lhs = big_log(&product);
        let rhs = big_log(&x) + big_log(&y);
        let rel = (lhs - rhs).abs() / lhs;
        prop_assert!(rel <= 5e-12, "rel = {rel}");
    }

    #[test]
    fn big_log_matches_f64_on_exact_powers(e in 1u32..800_000) {
        let v = Integer::from(1u32) << e;
        let expected = e as f64 * std::f64::consts::LN_2;
        let got = big_log(&v);
        prop_assert!(((got - expected) / expected).abs() <= 1e-13);
    }

    #[test]
    fn word_round_trip_and_reversal(n in 3usize..6, len in 0usize..40, seed in 0u64..500) {
        let w = MutationWord::seeded_random(n, len, seed);
        let text = serde_json::to_string(&w).unwrap();
        let back: MutationWord = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &w);
        let double_rev = w.reversed().reversed();
        prop_assert_eq!(double_rev, w);
    }

    #[test]
    fn involution_via_random_tree_points(grid in 0usize..5, seed in 0u64..200, len in 0usize..10, dir_seed in 0u64..97) {
        let eq = &grids()[grid];
        let limits = Limits::default();
        let word = MutationWord::seeded_random(eq.n(), len, seed);
        let chain = eq.apply_word(&SolutionTuple::ones(eq.n()), &word, &limits).unwrap();
        let x = chain.last().unwrap();
        let i = (dir_seed as usize % eq.n()) + 1;
        let y = eq.mutate(x, i).unwrap();
        prop_assert_eq!(eq.residual(&y).unwrap(), 0u32);
        prop_assert_eq!(&eq.mutate(&y, i).unwrap(), x);
    }

    #[test]
    fn euclid_integer_chains_stay_integral(n in 3usize..6, seed in 0u64..300, len in 0usize..60, k in 0u64..5) {
        let word = MutationWord::seeded_random(n, len, seed);
        let schedule = DeformationSchedule::constant(Rational::from(k)).unwrap();
        let chain = euclid_chain(&EuclidPoint::ones(n), &word, &schedule).unwrap();
        for p in &chain.points {
            for c in p.coords() {
                prop_assert_eq!(c.denom(), &Integer::from(1u32));
            }
        }
    }

    #[test]
    fn fixed_rounding_is_stable(v in -1.0e6f64..1.0e6, d in 0u32..6) {
        let a = mh_core::fmt::format_fixed(v, d);
        let b = mh_core::fmt::format_fixed(v, d);
        prop_assert_eq!(a, b);
    }
}

#[test]
fn power_tower_log_accuracy() {
    // 3^k has an easy exact logarithm: k * ln 3
    for k in [1u32, 10, 1000, 100_000, 600_000] {
        let v = Integer::from(3u32).pow(k);
        let expected = k as f64 * 3f64.ln();
        let got = big_log(&v);
        assert!(
            ((got - expected) / expected).abs() <= 1e-12,
            "k={k}: {got} vs {expected}"
        );
    }
}

#[test]
fn duplicate_reporting_counts_revisits() {
    // depth <= 4 trees of the lambda grids revisit no point, and every
    // emitted node is a solution
    for eq in grids() {
        let mut stream = expand_tree(
            &eq,
            &SolutionTuple::ones(eq.n()),
            EnumerationBound::depth(4),
        )
        .unwrap();
        let mut distinct = BTreeSet::new();
        let mut total = 0usize;
        for node in &mut stream {
            let node = node.unwrap();
            assert_eq!(eq.residual(&node.point).unwrap(), 0u32);
            distinct.insert(node.point);
            total += 1;
        }
        assert_eq!(stream.duplicate_count(), 0);
        assert_eq!(distinct.len(), total);
    }
}

#[test]
fn extended_family_involution_and_closure() {
    // a=2, b=2: (1,1,2) is a solution; mutations that stay positive are
    // involutive and closed, while the dead-end branch is reported
    let eq = Equation::new(3, vec![Integer::new(); 3], 2u32, 2u32).unwrap();
    let x = SolutionTuple::from_u64s(&[1, 1, 2]).unwrap();
    assert!(eq.is_solution(&x).unwrap());
    for i in [1usize, 2] {
        let y = eq.mutate(&x, i).unwrap();
        assert_eq!(eq.residual(&y).unwrap(), 0u32);
        assert_eq!(eq.mutate(&y, i).unwrap(), x);
    }
    assert!(matches!(eq.mutate(&x, 3), Err(Error::DeadEnd { .. })));
}

#[test]
fn uniqueness_reports_on_asymmetric_grids() {
    // the sweeps must produce reports for asymmetric lambda as well; the
    // contents are whatever the run finds, re-verified internally
    let limits = Limits::default();
    let eq = Equation::markov_hurwitz_u64(&[0, 1, 2, 3]).unwrap();
    let report = check_uniqueness(&eq, &Integer::from(10_000u64), &limits).unwrap();
    assert!(report.groups_checked >= 1);
    for ce in &report.counterexamples {
        assert!(ce.tail_a != ce.tail_b);
    }
    let report = positional_uniqueness(&eq, &Integer::from(1000u64), 3, &limits).unwrap();
    assert!(report.bound == 1000u64);
    serde_json::to_string(&report).unwrap();
}
