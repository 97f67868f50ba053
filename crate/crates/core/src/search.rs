//! Brute-force oracles over all `n^m` allocations, plus seeded random
//! instances for sweeps.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::allocation::{enumerate_allocations, Allocation};
use crate::allocators::optimal_allocation;
use crate::chore_set::{ChoreSet, MAX_CHORES};
use crate::cost::CostFunction;
use crate::criteria::{Criterion, Evaluator};
use crate::error::{Error, Result};
use crate::instance::{normalize, Instance};
use crate::rational::{ExtendedRational, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub instance_digest: String,
    pub criterion: Criterion,
    pub alpha: Rational,
    pub fair_exists: bool,
    pub best_fair_cost: Option<Rational>,
    pub opt_cost: Rational,
    pub price: Option<ExtendedRational>,
    pub witness: Option<Allocation>,
}

/// First 16 hex digits of the SHA-256 of the canonical JSON form.
pub fn instance_digest(inst: &Instance) -> String {
    let json = serde_json::to_string(inst).expect("instances serialize");
    let hash = Sha256::digest(json.as_bytes());
    hash[..8].iter().map(|b| format!("{b:02x}")).collect()
}

/// The cheapest allocation that is `alpha`-`crit`. Ties go to the
/// lexicographically first assignment.
pub fn best_fair_allocation(inst: &Instance, crit: Criterion, alpha: Rational) -> Result<SearchReport> {
    if alpha < Rational::ONE {
        return Err(Error::Argument(format!("alpha must be at least 1, got {alpha}")));
    }
    let allocations = enumerate_allocations(inst.m(), inst.n())?;
    let opt_cost = optimal_allocation(inst)?.social_cost;
    let mut ev = Evaluator::new(inst);
    let mut best: Option<(Rational, Allocation)> = None;
    for alloc in allocations {
        let sc: Rational = alloc
            .bundles()
            .iter()
            .enumerate()
            .map(|(i, b)| inst.eval(i, *b))
            .sum();
        if best.as_ref().is_some_and(|(b, _)| sc >= *b) {
            continue;
        }
        if ev.within(alloc.bundles(), crit, alpha) {
            best = Some((sc, alloc));
        }
    }
    let price = best
        .as_ref()
        .map(|(b, _)| ExtendedRational::ratio(*b, opt_cost));
    Ok(SearchReport {
        instance_digest: instance_digest(inst),
        criterion: crit,
        alpha,
        fair_exists: best.is_some(),
        best_fair_cost: best.as_ref().map(|(b, _)| *b),
        opt_cost,
        price,
        witness: best.map(|(_, a)| a),
    })
}

/// `best_fair_cost / OPT`. An instance with no `alpha`-`crit` allocation is
/// an error, not an infinite price.
pub fn price_of_fairness(inst: &Instance, crit: Criterion, alpha: Rational) -> Result<ExtendedRational> {
    let r = best_fair_allocation(inst, crit, alpha)?;
    r.price
        .ok_or_else(|| Error::NoFairAllocation(format!("{alpha}-{crit}")))
}

/// Cost-function families that [`random_instance`] can draw from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RandomSetting {
    /// Integer weights in `0..=100`, normalized.
    Additive,
    CappedAdditive,
    RowCoverage,
    CappedCardinality,
}

impl RandomSetting {
    pub const ALL: [RandomSetting; 4] = [
        RandomSetting::Additive,
        RandomSetting::CappedAdditive,
        RandomSetting::RowCoverage,
        RandomSetting::CappedCardinality,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RandomSetting::Additive => "additive",
            RandomSetting::CappedAdditive => "capped_additive",
            RandomSetting::RowCoverage => "row_coverage",
            RandomSetting::CappedCardinality => "capped_cardinality",
        }
    }
}

impl fmt::Display for RandomSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RandomSetting {
    type Err = Error;

    fn from_str(s: &str) -> Result<RandomSetting> {
        RandomSetting::ALL
            .into_iter()
            .find(|r| r.name() == s.trim())
            .ok_or_else(|| Error::Parse(format!("unknown random setting `{s}`")))
    }
}

/// Mixes a sweep's base seed with an item index (one splitmix64 round).
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_weights(rng: &mut ChaCha8Rng, m: usize, hi: i128) -> Vec<Rational> {
    loop {
        let w: Vec<i128> = (0..m).map(|_| rng.gen_range(0..=hi)).collect();
        if w.iter().any(|&x| x > 0) {
            return w.into_iter().map(Rational::from_integer).collect();
        }
    }
}

fn random_cost(rng: &mut ChaCha8Rng, m: usize, setting: RandomSetting) -> CostFunction {
    match setting {
        RandomSetting::Additive => CostFunction::Additive {
            values: random_weights(rng, m, 100),
        },
        RandomSetting::CappedAdditive => {
            let values = random_weights(rng, m, 100);
            let total: i128 = values.iter().map(|v| v.numer()).sum();
            let cap = Rational::from_integer(rng.gen_range(1..=total));
            CostFunction::CappedAdditive { values, cap }
        }
        RandomSetting::RowCoverage => {
            let groups = rng.gen_range(1..=m);
            let mut labels: Vec<usize> = (0..m).map(|e| if e < groups { e } else { rng.gen_range(0..groups) }).collect();
            labels.shuffle(rng);
            let mut rows = vec![ChoreSet::EMPTY; groups];
            for (e, &g) in labels.iter().enumerate() {
                rows[g].insert(e);
            }
            rows.sort_by_key(|r| r.iter().next());
            let weights = (0..groups)
                .map(|_| Rational::from_integer(rng.gen_range(1..=10)))
                .collect();
            CostFunction::RowCoverage { rows, weights }
        }
        RandomSetting::CappedCardinality => CostFunction::CappedCardinality {
            cap: rng.gen_range(1..=m as u32),
        },
    }
}

/// A reproducible instance. Additive draws are normalized; the other
/// settings keep their integer parameters.
pub fn random_instance(n: usize, m: usize, setting: RandomSetting, seed: u64) -> Result<Instance> {
    if n == 0 || m == 0 || m > MAX_CHORES {
        return Err(Error::Argument(format!(
            "random instances need n >= 1 and 1 <= m <= {MAX_CHORES}, got n={n}, m={m}"
        )));
    }
    let mut rng = rng_for(seed);
    let costs = (0..n).map(|_| random_cost(&mut rng, m, setting)).collect();
    let inst = Instance::new(m, costs)?;
    if setting == RandomSetting::Additive {
        normalize(&inst)
    } else {
        Ok(inst)
    }
}

/// A uniformly random allocation of `m` chores to `n` agents.
pub fn random_allocation(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Allocation {
    let assignment: Vec<usize> = (0..m).map(|_| rng.gen_range(0..n)).collect();
    Allocation::from_assignment(&assignment, n).expect("agents are in range")
}

fn thread_cap() -> Option<usize> {
    std::env::var("CHOREFAIR_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&t| t > 0)
}

/// Runs `f(0..count)` in parallel and returns the results in index order.
/// `CHOREFAIR_THREADS` caps the worker count.
pub fn parallel_map<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    let run = || (0..count).into_par_iter().map(&f).collect();
    match thread_cap() {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map(|pool| pool.install(run))
            .unwrap_or_else(|_| run()),
        None => run(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn ef1_price_instance() -> Instance {
        let eps = q(1, 100);
        Instance::new(
            3,
            vec![
                CostFunction::additive([q(0, 1), q(1, 2), q(1, 2)]),
                CostFunction::additive([q(1, 3) - q(2, 1) * eps, q(1, 3) + eps, q(1, 3) + eps]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn ef1_price() {
        let inst = ef1_price_instance();
        let r = best_fair_allocation(&inst, Criterion::Ef1, Rational::ONE).unwrap();
        assert_eq!(r.best_fair_cost, Some(q(253, 300)));
        assert_eq!(r.opt_cost, q(103, 150));
        assert_eq!(r.price, Some(q(253, 206).into()));
        assert_eq!(price_of_fairness(&inst, Criterion::Ef1, Rational::ONE).unwrap(), q(253, 206).into());
    }

    #[test]
    fn two_pmms_is_free() {
        let inst = ef1_price_instance();
        let r = best_fair_allocation(&inst, Criterion::Pmms, q(2, 1)).unwrap();
        assert_eq!(r.best_fair_cost, Some(r.opt_cost));
    }

    #[test]
    fn no_fair_allocation_is_an_error() {
        // One chore, two agents who both pay for it: nobody can hold it EF.
        let inst = Instance::new(1, vec![CostFunction::additive([q(1, 1)]); 2]).unwrap();
        assert!(matches!(
            price_of_fairness(&inst, Criterion::Ef, Rational::ONE),
            Err(Error::NoFairAllocation(_))
        ));
        assert_eq!(
            price_of_fairness(&inst, Criterion::Ef1, Rational::ONE).unwrap(),
            ExtendedRational::ONE
        );
    }

    #[test]
    fn random_instances_are_reproducible() {
        for setting in RandomSetting::ALL {
            let a = random_instance(2, 5, setting, 7).unwrap();
            let b = random_instance(2, 5, setting, 7).unwrap();
            assert_eq!(a, b);
            assert_eq!(instance_digest(&a), instance_digest(&b));
            for i in 0..a.n() {
                assert!(crate::cost::check_submodular(a.cost_fn(i), a.m()).unwrap());
            }
        }
        let a = random_instance(3, 6, RandomSetting::Additive, 1).unwrap();
        assert!(a.is_normalized());
        assert!((0..3).all(|i| a.total(i) == Rational::ONE));
        assert!(random_instance(0, 3, RandomSetting::Additive, 1).is_err());
    }

    #[test]
    fn parallel_map_keeps_order() {
        let v = parallel_map(100, |i| i * i);
        assert_eq!(v, (0..100).map(|i| i * i).collect::<Vec<_>>());
    }

    #[test]
    fn derived_seeds_differ() {
        assert_ne!(derive_seed(1, 0), derive_seed(1, 1));
        assert_ne!(derive_seed(1, 0), derive_seed(2, 0));
    }
}
