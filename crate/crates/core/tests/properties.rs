//! Property tests for the invariants every measurement has to respect.

use chorefair::allocators::{alg1_two_agent_ef1, round_robin};
use chorefair::criteria::{min_alpha, satisfies};
use chorefair::instance::normalize;
use chorefair::mms::{maximin_share, mms_share, mms_share_additive_fast};
use chorefair::search::{best_fair_allocation, random_instance, RandomSetting};
use chorefair::{q, Allocation, CostFunction, Criterion, ExtendedRational, Instance, Rational};
use proptest::prelude::*;

const ALL: [Criterion; 5] = [Criterion::Ef, Criterion::Ef1, Criterion::Efx, Criterion::Mms, Criterion::Pmms];

/// Small integer additive instance with an assignment of its chores.
fn additive_case(max_n: usize, max_m: usize) -> impl Strategy<Value = (Instance, Allocation)> {
    (2..=max_n, 1..=max_m)
        .prop_flat_map(|(n, m)| {
            (
                prop::collection::vec(prop::collection::vec(0i128..=12, m), n),
                prop::collection::vec(0..n, m),
            )
        })
        .prop_map(|(rows, assignment)| {
            let m = assignment.len();
            let n = rows.len();
            let costs = rows
                .into_iter()
                .map(|r| CostFunction::additive(r.into_iter().map(Rational::from_integer)))
                .collect();
            let inst = Instance::new(m, costs).unwrap();
            (inst, Allocation::from_assignment(&assignment, n).unwrap())
        })
}

fn setting() -> impl Strategy<Value = RandomSetting> {
    prop_oneof![
        Just(RandomSetting::Additive),
        Just(RandomSetting::CappedAdditive),
        Just(RandomSetting::RowCoverage),
        Just(RandomSetting::CappedCardinality),
    ]
}

fn all_alphas(inst: &Instance, alloc: &Allocation) -> Vec<ExtendedRational> {
    ALL.iter().map(|&c| min_alpha(inst, alloc, c).unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn factors_ignore_cost_scale((inst, alloc) in additive_case(3, 6), num in 1i128..20, den in 1i128..20) {
        let lambda = q(num, den);
        let scaled = Instance::new(
            inst.m(),
            inst.costs().iter().map(|c| c.scaled(lambda, inst.m()).unwrap()).collect(),
        ).unwrap();
        prop_assert_eq!(all_alphas(&inst, &alloc), all_alphas(&scaled, &alloc));
    }

    #[test]
    fn factors_ignore_agent_labels((inst, alloc) in additive_case(3, 6), shift in 0usize..3) {
        let n = inst.n();
        let perm: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
        let relabeled = Instance::new(
            inst.m(),
            perm.iter().map(|&p| inst.cost_fn(p).clone()).collect(),
        ).unwrap();
        prop_assert_eq!(all_alphas(&inst, &alloc), all_alphas(&relabeled, &alloc.permuted(&perm)));
    }

    #[test]
    fn envy_factors_are_ordered((inst, alloc) in additive_case(3, 6)) {
        let ef = min_alpha(&inst, &alloc, Criterion::Ef).unwrap();
        let efx = min_alpha(&inst, &alloc, Criterion::Efx).unwrap();
        let ef1 = min_alpha(&inst, &alloc, Criterion::Ef1).unwrap();
        prop_assert!(ef >= efx, "EF {} < EFX {}", ef, efx);
        prop_assert!(efx >= ef1, "EFX {} < EF1 {}", efx, ef1);
        prop_assert!(ef1 >= ExtendedRational::ONE);
    }

    #[test]
    fn min_alpha_is_the_threshold((inst, alloc) in additive_case(3, 5)) {
        for c in ALL {
            let a = min_alpha(&inst, &alloc, c).unwrap();
            if let Some(a) = a.finite() {
                prop_assert!(satisfies(&inst, &alloc, c, a).unwrap());
                if a > Rational::ONE {
                    let below = (a + Rational::ONE) / q(2, 1);
                    prop_assert!(!satisfies(&inst, &alloc, c, below).unwrap());
                }
            } else {
                prop_assert!(!satisfies(&inst, &alloc, c, q(1000, 1)).unwrap());
            }
        }
    }

    #[test]
    fn mms_engines_agree_on_additive((inst, _) in additive_case(3, 8), k in 1usize..=4) {
        let s = inst.chores();
        for i in 0..inst.n() {
            let rgs = mms_share(&inst, i, k, s).unwrap();
            let class = maximin_share(&inst, i, k, s).unwrap();
            let fast = mms_share_additive_fast(&inst, i, k, s).unwrap();
            prop_assert_eq!(rgs.value, class.value);
            prop_assert_eq!(rgs.value, fast.value);
            for w in [&rgs.witness, &class.witness, &fast.witness] {
                prop_assert_eq!(w.len(), k);
                let worst = w.iter().map(|b| inst.eval(i, *b)).max().unwrap();
                prop_assert_eq!(worst, rgs.value);
            }
        }
    }

    #[test]
    fn mms_engines_agree_beyond_additive(st in setting(), seed in any::<u64>(), n in 2usize..=4, m in 1usize..=8) {
        let inst = random_instance(n, m, st, seed).unwrap();
        for i in 0..n {
            let rgs = mms_share(&inst, i, n, inst.chores()).unwrap();
            let class = maximin_share(&inst, i, n, inst.chores()).unwrap();
            prop_assert_eq!(rgs.value, class.value, "agent {} in {:?}", i, st);
        }
    }

    #[test]
    fn round_robin_is_ef1((inst, _) in additive_case(4, 8), rotate in 0usize..4) {
        let n = inst.n();
        let order: Vec<usize> = (0..n).map(|i| (i + rotate) % n).collect();
        let out = round_robin(&inst, &order).unwrap();
        prop_assert!(satisfies(&inst, &out.allocation, Criterion::Ef1, Rational::ONE).unwrap());
        prop_assert_eq!(out.social_cost, out.allocation.social_cost(&inst).unwrap());
    }

    #[test]
    fn brute_force_never_beaten_by_alg1((inst, _) in additive_case(2, 7)) {
        prop_assume!((0..2).all(|i| inst.total(i).is_positive()));
        let inst = normalize(&inst).unwrap();
        let out = alg1_two_agent_ef1(&inst).unwrap();
        let best = best_fair_allocation(&inst, Criterion::Ef1, Rational::ONE).unwrap();
        prop_assert!(best.fair_exists);
        prop_assert!(best.best_fair_cost.unwrap() <= out.social_cost);
        prop_assert!(out.social_cost * q(4, 1) <= best.opt_cost * q(5, 1));
    }

    #[test]
    fn fair_cost_falls_as_alpha_grows((inst, _) in additive_case(3, 5), c in prop::sample::select(ALL.to_vec())) {
        let alphas = [q(1, 1), q(5, 4), q(3, 2), q(2, 1), q(4, 1)];
        let costs: Vec<Option<Rational>> = alphas
            .iter()
            .map(|&a| best_fair_allocation(&inst, c, a).unwrap().best_fair_cost)
            .collect();
        for w in costs.windows(2) {
            match (w[0], w[1]) {
                (Some(a), Some(b)) => prop_assert!(b <= a),
                (Some(_), None) => prop_assert!(false, "fairness lost when alpha grew"),
                _ => {}
            }
        }
        let opt = best_fair_allocation(&inst, c, alphas[0]).unwrap().opt_cost;
        prop_assert!(costs.iter().flatten().all(|&f| f >= opt));
    }

    #[test]
    fn rationals_round_trip(num in -10_000i128..10_000, den in 1i128..10_000) {
        let r = q(num, den);
        prop_assert_eq!(r.to_string().parse::<Rational>().unwrap(), r);
        let json = serde_json::to_string(&r).unwrap();
        prop_assert_eq!(serde_json::from_str::<Rational>(&json).unwrap(), r);
    }

    #[test]
    fn instances_round_trip_through_json(st in setting(), seed in any::<u64>(), n in 2usize..=4, m in 1usize..=8) {
        let inst = random_instance(n, m, st, seed).unwrap();
        let json = serde_json::to_string(&inst).unwrap();
        let back: Instance = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, inst);
    }
}
