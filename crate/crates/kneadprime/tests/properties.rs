//! Randomized cross-cutting properties: ordering laws against an independent
//! invariant-coordinate oracle, composition algebra, orbit confinement,
//! kneading monotonicity, solver round trips, and statistics sanity.

use std::cmp::Ordering;

use kneadprime::{
    compare_histograms, compose, constructed_prime_gaps, format_float, histogram, kneading_of,
    orbit, prime_gaps, sieve_primes, sieve_word, solve_parameter, DynamicsError, Symbol,
    SymbolicWord,
};
use proptest::prelude::*;

fn symbols(bits: Vec<bool>) -> Vec<Symbol> {
    bits.into_iter()
        .map(|bit| if bit { Symbol::R } else { Symbol::L })
        .collect()
}

/// Purely periodic `C`-free words with primitive period up to 8.
fn periodic_word() -> impl Strategy<Value = SymbolicWord> {
    proptest::collection::vec(any::<bool>(), 1..=8)
        .prop_map(|per| SymbolicWord::purely_periodic(&symbols(per)).expect("no C symbol"))
}

/// Eventually periodic `C`-free words with preperiod up to 8 and period up to 8.
fn eventually_periodic_word() -> impl Strategy<Value = SymbolicWord> {
    (
        proptest::collection::vec(any::<bool>(), 0..=8),
        proptest::collection::vec(any::<bool>(), 1..=8),
    )
        .prop_map(|(pre, per)| {
            SymbolicWord::eventually_periodic(&symbols(pre), &symbols(per)).expect("no C symbol")
        })
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(mut a: usize, mut b: usize) -> usize {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    }
    a / gcd(a, b) * b
}

/// A horizon past which two eventually periodic words can no longer differ.
fn joint_horizon(a: &SymbolicWord, b: &SymbolicWord) -> usize {
    a.preperiod_len().max(b.preperiod_len()) + lcm(a.period_len().max(1), b.period_len().max(1)) + 1
}

/// Independent ordering oracle: the kneading order equals lexicographic order
/// on the cumulative R-parity bits t_k = (number of R among w_0..w_k) mod 2,
/// the binary digits of the word's invariant coordinate.
fn oracle_compare(a: &SymbolicWord, b: &SymbolicWord) -> Ordering {
    let horizon = joint_horizon(a, b);
    let parity_bits = |w: &SymbolicWord| {
        let mut acc = 0u8;
        w.expand(horizon)
            .expect("periodic words expand to any length")
            .into_iter()
            .map(|s| {
                if s == Symbol::R {
                    acc ^= 1;
                }
                acc
            })
            .collect::<Vec<u8>>()
    };
    parity_bits(a).cmp(&parity_bits(b))
}

proptest! {
    #[test]
    fn compare_matches_the_invariant_coordinate_oracle(
        a in eventually_periodic_word(),
        b in eventually_periodic_word(),
    ) {
        prop_assert_eq!(a.compare(&b), oracle_compare(&a, &b));
    }

    #[test]
    fn compare_is_antisymmetric(
        a in eventually_periodic_word(),
        b in eventually_periodic_word(),
    ) {
        prop_assert_eq!(a.compare(&b), b.compare(&a).reverse());
    }

    #[test]
    fn compare_is_transitive(
        a in eventually_periodic_word(),
        b in eventually_periodic_word(),
        c in eventually_periodic_word(),
    ) {
        if a.compare(&b) != Ordering::Greater && b.compare(&c) != Ordering::Greater {
            prop_assert_ne!(a.compare(&c), Ordering::Greater);
        }
    }

    #[test]
    fn equal_words_agree_symbol_by_symbol(
        a in eventually_periodic_word(),
        b in eventually_periodic_word(),
    ) {
        if a.compare(&b) == Ordering::Equal {
            let horizon = joint_horizon(&a, &b);
            prop_assert_eq!(a.expand(horizon).unwrap(), b.expand(horizon).unwrap());
            // Normalization is canonical, so equal words are structurally equal.
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn shifts_compose_additively(
        w in eventually_periodic_word(),
        i in 0usize..6,
        j in 0usize..6,
    ) {
        let two_step = w.shift(i).unwrap().shift(j).unwrap();
        let one_step = w.shift(i + j).unwrap();
        prop_assert_eq!(two_step, one_step);
    }

    #[test]
    fn compose_is_commutative(a in periodic_word(), b in periodic_word()) {
        prop_assert_eq!(compose(&a, &b).unwrap(), compose(&b, &a).unwrap());
    }

    #[test]
    fn compose_is_associative(
        a in periodic_word(),
        b in periodic_word(),
        c in periodic_word(),
    ) {
        let left = compose(&compose(&a, &b).unwrap(), &c).unwrap();
        let right = compose(&a, &compose(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn compose_is_idempotent(a in periodic_word()) {
        prop_assert_eq!(compose(&a, &a).unwrap(), a);
    }

    #[test]
    fn all_l_word_is_the_compose_identity(a in periodic_word()) {
        let identity = SymbolicWord::purely_periodic(&[Symbol::L]).unwrap();
        prop_assert_eq!(compose(&a, &identity).unwrap(), a);
    }

    #[test]
    fn orbits_stay_confined_to_the_interval(
        u in 1e-6..=2.0f64,
        x0 in -1.0..=1.0f64,
        n in 1usize..200,
        transient in 0usize..50,
    ) {
        let orbit = orbit(u, x0, n, transient).unwrap();
        prop_assert_eq!(orbit.points.len(), n);
        for &x in &orbit.points {
            prop_assert!((-1.0..=1.0).contains(&x), "point {x} escaped [-1, 1]");
        }
    }

    #[test]
    fn kneading_words_are_shift_maximal(u in 1.0..=2.0f64) {
        let word = kneading_of(u, 40).unwrap();
        prop_assume!(!word.ends_with_c());
        prop_assert_eq!(word.violating_shift(), None);
    }

    #[test]
    fn kneading_order_is_monotone_in_the_parameter(
        first in 1.0..=2.0f64,
        second in 1.0..=2.0f64,
    ) {
        let (lo, hi) = if first <= second { (first, second) } else { (second, first) };
        let word_lo = kneading_of(lo, 40).unwrap();
        let word_hi = kneading_of(hi, 40).unwrap();
        prop_assume!(!word_lo.ends_with_c() && !word_hi.ends_with_c());
        prop_assert_ne!(word_lo.compare(&word_hi), Ordering::Greater);
    }

    #[test]
    fn sieve_word_positions_follow_divisibility(i in 1usize..=5, j in 0u64..2310) {
        let word = sieve_word(i).unwrap();
        let primes = sieve_primes(11).unwrap();
        let marked = primes.primes()[..i].iter().any(|&p| j % p == 0);
        let position = (j % word.period_len() as u64) as usize;
        let expected = if marked { Symbol::R } else { Symbol::L };
        prop_assert_eq!(word.symbol_at(position), Some(expected));
    }

    #[test]
    fn prime_gaps_telescope_to_the_last_prime(limit in 10u64..3000) {
        let gaps = prime_gaps(limit).unwrap();
        let primes = sieve_primes(limit).unwrap();
        let total: u64 = gaps.gaps().iter().sum();
        prop_assert_eq!(total, primes.primes().last().unwrap() - 2);
        prop_assert_eq!(gaps.len(), primes.len() - 1);
    }

    #[test]
    fn histogram_frequencies_form_a_distribution(limit in 10u64..2000) {
        let hist = histogram(&prime_gaps(limit).unwrap()).unwrap();
        let count_total: u64 = hist.bins.values().sum();
        prop_assert_eq!(count_total, hist.total);
        let frequency_total: f64 = hist.frequencies().values().sum();
        prop_assert!((frequency_total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn total_variation_is_a_symmetric_bounded_distance(
        limit in 10u64..2000,
        u in 1.4..=2.0f64,
        n in 200usize..1000,
    ) {
        let left = histogram(&prime_gaps(limit).unwrap()).unwrap();
        match constructed_prime_gaps(u, 0.3, n, 100) {
            Ok(gaps) => {
                let right = histogram(&gaps).unwrap();
                let forward = compare_histograms(&left, &right).unwrap();
                let backward = compare_histograms(&right, &left).unwrap();
                prop_assert_eq!(forward.total_variation, backward.total_variation);
                prop_assert!((0.0..=1.0).contains(&forward.total_variation));
                let reflexive = compare_histograms(&left, &left).unwrap();
                prop_assert_eq!(reflexive.total_variation, 0.0);
            }
            // A stable window may keep every recorded point positive.
            Err(DynamicsError::NoPrimePoints) => {}
            Err(other) => return Err(TestCaseError::fail(format!("unexpected error: {other}"))),
        }
    }

    #[test]
    fn float_serialization_round_trips(x in proptest::num::f64::NORMAL | proptest::num::f64::ZERO) {
        let parsed: f64 = format_float(x).parse().unwrap();
        prop_assert_eq!(parsed.to_bits(), x.to_bits());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Bisection never discards a parameter whose kneading prefix equals the
    /// target, so solving the prefix of a sampled `u` must return a bracket
    /// containing `u` (up to edge-refinement tolerance). Symbol-for-symbol
    /// prefix reproduction is NOT required: near `u = 2` the deep symbols are
    /// more sensitive to `u` than one floating-point step can resolve.
    #[test]
    fn solving_a_sampled_prefix_recovers_the_sampled_parameter(u in 1.01..=2.0f64) {
        let target = kneading_of(u, 30).unwrap();
        prop_assume!(!target.ends_with_c());
        let solved = solve_parameter(&target, 30, 1e-9).unwrap();
        let (lo, hi) = solved.bracket;
        prop_assert!(
            lo - 1e-8 <= u && u <= hi + 1e-8,
            "u = {u} fell outside the returned bracket [{lo}, {hi}]"
        );
        prop_assert!(
            (solved.u - u).abs() <= (hi - lo).max(1e-9) + 1e-8,
            "u = {} solved to {} beyond bracket resolution",
            u,
            solved.u
        );
    }
}
