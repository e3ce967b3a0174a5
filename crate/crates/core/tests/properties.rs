use num_traits::One;
use proptest::prelude::*;

use statdisc::blackwell::{classify, mps_dominates, Classification, Dominance, Side, Tag};
use statdisc::exante::{excludes, n_dominates, normalize_firm};
use statdisc::lp::{solve_feasibility, Feasibility, FeasibilitySystem};
use statdisc::model::{canonicalize, expected_surplus, skill_distribution, ExAnteFirm, Population};
use statdisc::oracle::{random_mps_split, random_population, random_population_with_mean, sample_random_firm, InstanceSeed};
use statdisc::rational::{format_rational, parse_rational, q, Rational};

fn seed_strategy() -> impl Strategy<Value = InstanceSeed> {
    (any::<u64>(), 1usize..=4, 1usize..=5, 1u32..=8)
        .prop_map(|(s, dim, support, den)| InstanceSeed::new(s, dim, support, den).unwrap())
}

fn rational_strategy() -> impl Strategy<Value = Rational> {
    (-1000i64..=1000, 1i64..=1000).prop_map(|(n, d)| q(n, d))
}

fn same_mean_pair(seed: InstanceSeed) -> (Population, Population) {
    let base = random_population(seed);
    let other = random_population_with_mean(&skill_distribution(&base), seed.derive(5));
    (base, other)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rationals_round_trip(x in rational_strategy()) {
        prop_assert_eq!(parse_rational(&format_rational(&x)).unwrap(), x);
    }

    #[test]
    fn canonical_form_is_idempotent(seed in seed_strategy()) {
        let p = random_population(seed);
        let again = canonicalize(p.atoms().iter().map(|a| (a.belief.clone(), a.weight.clone())).collect()).unwrap();
        prop_assert_eq!(&again, &p);
        prop_assert_eq!(p.weights().sum::<Rational>(), Rational::one());
    }

    #[test]
    fn surplus_is_covariant_under_shift_and_scale(seed in seed_strategy(), shift in rational_strategy(), k in 1i64..=9) {
        let p = random_population(seed);
        let firm = sample_random_firm(seed.derive(3), 1 + seed.skill_count, 4);
        let base = expected_surplus(&firm, &p);
        // Beliefs sum to one, so adding `shift` to every payoff adds `shift` to every value.
        prop_assert_eq!(expected_surplus(&firm.shifted(&shift), &p), &base + &shift);
        prop_assert_eq!(expected_surplus(&firm.scaled(&q(k, 1)), &p), &base * q(k, 1));
    }

    #[test]
    fn surplus_is_affine_in_the_population(seed in seed_strategy(), num in 0i64..=8) {
        let (a, b) = same_mean_pair(seed);
        let lambda = q(num, 8);
        let firm = sample_random_firm(seed.derive(4), 2, 4);
        let mixed = a.mix(&b, &lambda).unwrap();
        let expected = &lambda * expected_surplus(&firm, &a) + (Rational::one() - &lambda) * expected_surplus(&firm, &b);
        prop_assert_eq!(expected_surplus(&firm, &mixed), expected);
    }

    #[test]
    fn every_population_dominates_itself(seed in seed_strategy()) {
        let p = random_population(seed);
        prop_assert!(mps_dominates(&p, &p).unwrap().holds());
        prop_assert_eq!(classify(&p, &p).unwrap().tag(), Tag::NoDiscrimination);
        prop_assert!(n_dominates(&p, &p).unwrap());
    }

    #[test]
    fn classification_is_symmetric(seed in seed_strategy()) {
        let (a, b) = same_mean_pair(seed);
        prop_assert_eq!(classify(&a, &b).unwrap().tag(), classify(&b, &a).unwrap().tag().swapped());
    }

    #[test]
    fn composed_splits_dominate(seed in seed_strategy()) {
        let base = random_population(seed);
        let once = random_mps_split(&base, seed.derive(1));
        let twice = random_mps_split(&once.population, seed.derive(2));
        let composed = once.coupling.compose(&twice.coupling).unwrap();
        prop_assert_eq!(composed.source(), &base);
        prop_assert_eq!(composed.target(), &twice.population);
        prop_assert!(mps_dominates(&twice.population, &base).unwrap().holds());
        // The spread order refines the zero-cost order.
        prop_assert!(n_dominates(&twice.population, &base).unwrap());
    }

    #[test]
    fn dominance_verdicts_carry_valid_evidence(seed in seed_strategy()) {
        let (a, b) = same_mean_pair(seed);
        match mps_dominates(&a, &b).unwrap() {
            Dominance::Dominates(c) => prop_assert!(c.verify().is_ok()),
            Dominance::NotDominates(_) => {
                // Without `a` over `b`, nothing can be systematic against `b`.
                let verdict = classify(&a, &b).unwrap();
                let against_second = matches!(verdict, Classification::SystematicAgainst { against: Side::Second, .. });
                prop_assert!(!against_second);
            }
        }
    }

    #[test]
    fn lp_answers_verify(
        rows in prop::collection::vec(prop::collection::vec(-4i64..=4, 3), 1..=4),
        rhs in prop::collection::vec(-4i64..=4, 4),
    ) {
        let m = rows.len();
        let system = FeasibilitySystem::new(
            rows.iter().map(|r| r.iter().map(|&x| q(x, 1)).collect()).collect(),
            rhs[..m].iter().map(|&x| q(x, 1)).collect(),
            3,
        ).unwrap();
        match solve_feasibility(&system).unwrap() {
            Feasibility::Feasible(w) => prop_assert!(system.is_solution(&w)),
            Feasibility::Infeasible(c) => prop_assert!(system.certifies(c.multipliers())),
        }
    }

    #[test]
    fn normalization_preserves_exclusion(seed in seed_strategy(), alpha in 1i64..=8, cost in 0i64..=40) {
        let p = random_population(seed);
        let firm = ExAnteFirm::new(sample_random_firm(seed.derive(6), 2, 4), q(alpha, 8)).unwrap();
        let normalized = normalize_firm(&firm);
        prop_assert_eq!(normalized.alpha(), &Rational::one());
        let cost = q(cost, 16);
        prop_assert_eq!(excludes(&firm, &cost, &p), excludes(&normalized, &cost, &p));
    }

    #[test]
    fn exclusion_is_monotone_in_cost(seed in seed_strategy(), lo in 0i64..=20, gap in 0i64..=20) {
        let p = random_population(seed);
        let firm = ExAnteFirm::new(sample_random_firm(seed.derive(8), 2, 4), Rational::one()).unwrap();
        let (c1, c2) = (q(lo, 8), q(lo + gap, 8));
        prop_assert!(!excludes(&firm, &c1, &p) || excludes(&firm, &c2, &p));
    }

    #[test]
    fn zero_cost_order_is_transitive(seed in seed_strategy()) {
        let a = random_population(seed);
        let b = random_mps_split(&a, seed.derive(1)).population;
        let c = random_population_with_mean(&skill_distribution(&a), seed.derive(2));
        let d = random_mps_split(&b, seed.derive(3)).population;
        for (x, y, z) in [(&a, &b, &c), (&a, &b, &d), (&c, &a, &b), (&a, &c, &d)] {
            if n_dominates(y, x).unwrap() && n_dominates(z, y).unwrap() {
                prop_assert!(n_dominates(z, x).unwrap());
            }
        }
    }
}
