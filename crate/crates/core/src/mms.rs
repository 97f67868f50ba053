//! Maximin shares `MMS_i(k, S)`: the least achievable maximum bundle cost
//! over partitions of `S` into `k` (possibly empty) bundles.

use serde::Serialize;

use crate::chore_set::ChoreSet;
use crate::cost::CostFunction;
use crate::error::{size_guard, Error, Result};
use crate::instance::Instance;
use crate::rational::Rational;

/// Largest `|S|` accepted by [`mms_share`].
pub const MMS_ENUM_MAX_CHORES: usize = 14;
/// Largest `k` accepted by [`mms_share`].
pub const MMS_ENUM_MAX_BLOCKS: usize = 6;
/// Largest `|A ∪ B|` accepted by [`pairwise_mms`].
pub const PAIRWISE_MAX_CHORES: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MmsResult {
    pub value: Rational,
    /// `k` disjoint bundles whose union is `S`.
    pub witness: Vec<ChoreSet>,
}

fn check_query(inst: &Instance, agent: usize, k: usize, s: ChoreSet) -> Result<()> {
    inst.check_agent(agent)?;
    inst.check_set(s)?;
    if k == 0 {
        return Err(Error::Argument("k must be at least 1".into()));
    }
    Ok(())
}

fn empty_result(k: usize) -> MmsResult {
    MmsResult {
        value: Rational::ZERO,
        witness: vec![ChoreSet::EMPTY; k],
    }
}

/// Exact MMS by enumerating restricted-growth strings with branch and bound.
///
/// Among optimal partitions the lexicographically smallest string wins.
pub fn mms_share(inst: &Instance, agent: usize, k: usize, s: ChoreSet) -> Result<MmsResult> {
    check_query(inst, agent, k, s)?;
    size_guard("|S| for partition enumeration", s.len() as u64, MMS_ENUM_MAX_CHORES as u64)?;
    size_guard("k for partition enumeration", k as u64, MMS_ENUM_MAX_BLOCKS as u64)?;
    if s.is_empty() {
        return Ok(empty_result(k));
    }
    let f = inst.cost_fn(agent);
    let mut search = Rgs {
        f,
        prune: f.is_subadditive_variant(),
        items: s.to_vec(),
        k,
        labels: vec![0; s.len()],
        blocks: vec![ChoreSet::EMPTY; k],
        best: None,
        best_labels: vec![],
    };
    search.dfs(0, 0, Rational::ZERO);
    let value = search.best.expect("at least one partition exists");
    let mut witness = vec![ChoreSet::EMPTY; k];
    for (pos, &e) in search.items.iter().enumerate() {
        witness[search.best_labels[pos]].insert(e);
    }
    Ok(MmsResult { value, witness })
}

struct Rgs<'a> {
    f: &'a CostFunction,
    prune: bool,
    items: Vec<usize>,
    k: usize,
    labels: Vec<usize>,
    blocks: Vec<ChoreSet>,
    best: Option<Rational>,
    best_labels: Vec<usize>,
}

impl Rgs<'_> {
    fn beats_best(&self, v: Rational) -> bool {
        self.best.is_none_or(|b| v < b)
    }

    fn dfs(&mut self, pos: usize, used: usize, cur_max: Rational) {
        if pos == self.items.len() {
            let value = if self.prune {
                cur_max
            } else {
                self.blocks.iter().map(|b| self.f.eval(*b)).max().unwrap()
            };
            if self.beats_best(value) {
                self.best = Some(value);
                self.best_labels = self.labels.clone();
            }
            return;
        }
        let e = self.items[pos];
        for b in 0..(used + 1).min(self.k) {
            let old = self.blocks[b];
            self.blocks[b] = old.with(e);
            let next_max = if self.prune {
                cur_max.max(self.f.eval(self.blocks[b]))
            } else {
                cur_max
            };
            if !self.prune || self.beats_best(next_max) {
                self.labels[pos] = b;
                self.dfs(pos + 1, used.max(b + 1), next_max);
            }
            self.blocks[b] = old;
        }
    }
}

/// `MMS_i(2, a ∪ b)` by enumerating the `2^{|a∪b|-1}` two-way splits.
pub fn pairwise_mms(inst: &Instance, agent: usize, a: ChoreSet, b: ChoreSet) -> Result<MmsResult> {
    inst.check_agent(agent)?;
    inst.check_set(a)?;
    inst.check_set(b)?;
    if !a.is_disjoint(b) {
        return Err(Error::Argument(format!("bundles {a} and {b} overlap")));
    }
    let u = a.union(b);
    size_guard("|A ∪ B| for split enumeration", u.len() as u64, PAIRWISE_MAX_CHORES as u64)?;
    if u.is_empty() {
        return Ok(empty_result(2));
    }
    let f = inst.cost_fn(agent);
    let items = u.to_vec();
    let first = ChoreSet::singleton(items[0]);
    let rest = &items[1..];
    let mut best: Option<(Rational, ChoreSet)> = None;
    for mask in 0u64..1 << rest.len() {
        let mut left = first;
        for (bit, &e) in rest.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                left.insert(e);
            }
        }
        let v = f.eval(left).max(f.eval(u.difference(left)));
        if best.is_none_or(|(bv, _)| v < bv) {
            best = Some((v, left));
        }
    }
    let (value, left) = best.unwrap();
    Ok(MmsResult {
        value,
        witness: vec![left, u.difference(left)],
    })
}

/// Exact MMS for additive agents, grouping equal-valued chores.
pub fn mms_share_additive_fast(
    inst: &Instance,
    agent: usize,
    k: usize,
    s: ChoreSet,
) -> Result<MmsResult> {
    check_query(inst, agent, k, s)?;
    if !inst.cost_fn(agent).is_additive() {
        return Err(Error::UnsupportedVariant(format!(
            "the additive MMS path does not accept {} costs",
            inst.cost_fn(agent).variant_name()
        )));
    }
    Ok(class_search(inst.cost_fn(agent), k, s))
}

/// Exact MMS for any variant.
///
/// Chores the cost function cannot tell apart are grouped, so the search
/// runs over per-bundle counts of each group rather than over chores. This
/// keeps the structured instances from the catalog tractable well past the
/// enumeration guards of [`mms_share`].
pub fn maximin_share(inst: &Instance, agent: usize, k: usize, s: ChoreSet) -> Result<MmsResult> {
    check_query(inst, agent, k, s)?;
    Ok(class_search(inst.cost_fn(agent), k, s))
}

/// Lemma-style lower bound `max(c(S)/k, max_e c(e))`, valid for subadditive costs.
pub fn subadditive_lower_bound(f: &CostFunction, k: usize, s: ChoreSet) -> Rational {
    let spread = f.eval(s) / Rational::from(k);
    s.iter().map(|e| f.single(e)).fold(spread, Rational::max)
}

fn class_search(f: &CostFunction, k: usize, s: ChoreSet) -> MmsResult {
    if s.is_empty() {
        return empty_result(k);
    }
    let mut classes = f.interchange_classes(s);
    classes.sort_by(|x, y| {
        f.single(y[0])
            .cmp(&f.single(x[0]))
            .then(y.len().cmp(&x.len()))
            .then(x[0].cmp(&y[0]))
    });
    let unit = f
        .is_additive()
        .then(|| classes.iter().map(|c| f.single(c[0])).collect::<Vec<_>>());
    let monotone = f.is_subadditive_variant();
    let lower = monotone.then(|| subadditive_lower_bound(f, k, s));

    let mut search = ClassSearch {
        f,
        classes,
        unit,
        k,
        monotone,
        counts: vec![],
        sets: vec![ChoreSet::EMPTY; k],
        costs: vec![Rational::ZERO; k],
        tied: vec![],
        best: Rational::ZERO,
        best_counts: vec![],
        lower: None,
        done: false,
    };
    let t_count = search.classes.len();
    search.counts = vec![vec![0; t_count]; k];
    search.tied = vec![vec![false; k]; t_count + 1];
    for b in 1..k {
        search.tied[0][b] = true;
    }
    search.seed_greedy();
    if lower == Some(search.best) {
        search.done = true;
    }
    search.lower = lower;
    if !search.done {
        let first = search.classes[0].len();
        search.place(0, 0, first, 0);
    }
    let witness = search.witness(&search.best_counts);
    MmsResult {
        value: search.best,
        witness,
    }
}

struct ClassSearch<'a> {
    f: &'a CostFunction,
    classes: Vec<Vec<usize>>,
    unit: Option<Vec<Rational>>,
    k: usize,
    monotone: bool,
    counts: Vec<Vec<usize>>,
    sets: Vec<ChoreSet>,
    costs: Vec<Rational>,
    tied: Vec<Vec<bool>>,
    best: Rational,
    best_counts: Vec<Vec<usize>>,
    lower: Option<Rational>,
    done: bool,
}

impl ClassSearch<'_> {
    fn seed_greedy(&mut self) {
        let mut sets = vec![ChoreSet::EMPTY; self.k];
        let mut counts = vec![vec![0; self.classes.len()]; self.k];
        for (t, class) in self.classes.iter().enumerate() {
            for &e in class {
                let b = (0..self.k)
                    .min_by_key(|&b| (self.f.eval(sets[b].with(e)), b))
                    .unwrap();
                sets[b].insert(e);
                counts[b][t] += 1;
            }
        }
        // Re-materialize so that the witness layout matches `witness`.
        let sets = self.sets_for(&counts);
        self.best = sets.iter().map(|s| self.f.eval(*s)).max().unwrap();
        self.best_counts = counts;
    }

    fn sets_for(&self, counts: &[Vec<usize>]) -> Vec<ChoreSet> {
        let mut sets = vec![ChoreSet::EMPTY; self.k];
        for (t, class) in self.classes.iter().enumerate() {
            let mut off = 0;
            for b in 0..self.k {
                let c = counts[b][t];
                sets[b] = sets[b].union(class[off..off + c].iter().copied().collect());
                off += c;
            }
        }
        sets
    }

    fn witness(&self, counts: &[Vec<usize>]) -> Vec<ChoreSet> {
        self.sets_for(counts)
    }

    fn place(&mut self, t: usize, b: usize, remaining: usize, offset: usize) {
        if self.done {
            return;
        }
        let cap = if self.tied[t][b] {
            self.counts[b - 1][t].min(remaining)
        } else {
            remaining
        };
        let last = b + 1 == self.k;
        if last && remaining > cap {
            return;
        }
        let lo = if last { remaining } else { 0 };
        for c in (lo..=cap).rev() {
            let old_set = self.sets[b];
            let old_cost = self.costs[b];
            let chunk: ChoreSet = self.classes[t][offset..offset + c].iter().copied().collect();
            self.sets[b] = old_set.union(chunk);
            self.costs[b] = match &self.unit {
                Some(unit) => old_cost + unit[t] * Rational::from(c),
                None => self.f.eval(self.sets[b]),
            };
            self.counts[b][t] = c;
            if !self.monotone || self.costs[b] < self.best {
                if last {
                    self.finish_class(t);
                } else {
                    self.place(t, b + 1, remaining - c, offset + c);
                }
            }
            self.counts[b][t] = 0;
            self.sets[b] = old_set;
            self.costs[b] = old_cost;
            if self.done {
                return;
            }
        }
    }

    fn finish_class(&mut self, t: usize) {
        for b in 1..self.k {
            self.tied[t + 1][b] = self.tied[t][b] && self.counts[b][t] == self.counts[b - 1][t];
        }
        if t + 1 < self.classes.len() {
            let next = self.classes[t + 1].len();
            self.place(t + 1, 0, next, 0);
            return;
        }
        let value = if self.monotone {
            *self.costs.iter().max().unwrap()
        } else {
            self.sets.iter().map(|s| self.f.eval(*s)).max().unwrap()
        };
        if value < self.best {
            self.best = value;
            self.best_counts = self.counts.clone();
            if self.lower == Some(value) {
                self.done = true;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn example1() -> Instance {
        let row = |v: &[i128]| CostFunction::additive(v.iter().map(|&x| Rational::from_integer(x)));
        Instance::new(
            7,
            vec![
                row(&[2, 3, 3, 0, 4, 2, 1]),
                row(&[3, 1, 3, 2, 5, 0, 5]),
                row(&[1, 5, 10, 2, 3, 1, 3]),
            ],
        )
        .unwrap()
    }

    fn check_witness(inst: &Instance, agent: usize, s: ChoreSet, r: &MmsResult) {
        let mut seen = ChoreSet::EMPTY;
        for b in &r.witness {
            assert!(b.is_disjoint(seen));
            seen = seen.union(*b);
        }
        assert_eq!(seen, s);
        let max = r.witness.iter().map(|b| inst.eval(agent, *b)).max().unwrap();
        assert_eq!(max, r.value);
    }

    #[test]
    fn example_one_shares() {
        let inst = example1();
        let e = inst.chores();
        for (agent, want) in [(0, 5), (1, 7), (2, 10)] {
            let r = mms_share(&inst, agent, 3, e).unwrap();
            assert_eq!(r.value, q(want, 1));
            check_witness(&inst, agent, e, &r);
            let fast = mms_share_additive_fast(&inst, agent, 3, e).unwrap();
            assert_eq!(fast.value, r.value);
            check_witness(&inst, agent, e, &fast);
        }
    }

    #[test]
    fn example_one_agent_two_partition() {
        // {e1,e3},{e2,e7},{e4,e5,e6} is optimal too; the tie-break picks the
        // lexicographically first optimal partition.
        let inst = example1();
        let other: Vec<ChoreSet> = vec![
            [0, 2].into_iter().collect(),
            [1, 6].into_iter().collect(),
            [3, 4, 5].into_iter().collect(),
        ];
        let other_max = other.iter().map(|b| inst.eval(1, *b)).max().unwrap();
        let r = mms_share(&inst, 1, 3, inst.chores()).unwrap();
        assert_eq!(other_max, r.value);
        assert_eq!(
            r.witness,
            vec![
                [0, 1, 2, 5].into_iter().collect::<ChoreSet>(),
                [3, 4].into_iter().collect(),
                [6].into_iter().collect(),
            ]
        );
    }

    #[test]
    fn single_block_and_empty_set() {
        let inst = example1();
        let s: ChoreSet = [1, 2, 4].into_iter().collect();
        let r = mms_share(&inst, 0, 1, s).unwrap();
        assert_eq!(r.value, q(10, 1));
        assert_eq!(r.witness, vec![s]);
        let e = pairwise_mms(&inst, 0, ChoreSet::EMPTY, ChoreSet::EMPTY).unwrap();
        assert_eq!(e.value, Rational::ZERO);
    }

    #[test]
    fn pairwise_example_bundle() {
        let inst = example1();
        let b1: ChoreSet = [0, 4, 6].into_iter().collect();
        let b3: ChoreSet = [2].into_iter().collect();
        assert_eq!(pairwise_mms(&inst, 0, b1, b3).unwrap().value, q(5, 1));
        assert!(pairwise_mms(&inst, 0, b1, b1).is_err());
    }

    #[test]
    fn capped_cardinality_pair() {
        let inst = Instance::new(3, vec![CostFunction::CappedCardinality { cap: 2 }]).unwrap();
        let r = pairwise_mms(&inst, 0, ChoreSet::full(3), ChoreSet::EMPTY).unwrap();
        assert_eq!(r.value, q(2, 1));
        assert_eq!(maximin_share(&inst, 0, 2, ChoreSet::full(3)).unwrap().value, q(2, 1));
    }

    #[test]
    fn guards() {
        let inst = Instance::new(15, vec![CostFunction::CappedCardinality { cap: 3 }]).unwrap();
        assert!(matches!(
            mms_share(&inst, 0, 2, inst.chores()),
            Err(Error::Size { .. })
        ));
        assert!(matches!(
            mms_share(&inst, 0, 7, ChoreSet::range(0, 3)),
            Err(Error::Size { .. })
        ));
        assert!(mms_share(&inst, 1, 2, ChoreSet::EMPTY).is_err());
        assert!(matches!(
            mms_share_additive_fast(&inst, 0, 2, ChoreSet::EMPTY),
            Err(Error::UnsupportedVariant(_))
        ));
    }

    #[test]
    fn isolated_chores_when_k_is_large() {
        let inst = Instance::new(
            4,
            vec![CostFunction::additive([q(1, 1), q(7, 2), q(2, 1), q(1, 3)])],
        )
        .unwrap();
        let r = mms_share_additive_fast(&inst, 0, 5, inst.chores()).unwrap();
        assert_eq!(r.value, q(7, 2));
        assert_eq!(r.witness.len(), 5);
    }

    #[test]
    fn table_functions_are_searched_without_pruning() {
        // Non-monotone: the full set is cheaper than either singleton.
        let f = CostFunction::Table {
            values: vec![q(0, 1), q(3, 1), q(3, 1), q(1, 1)],
        };
        let inst = Instance::new(2, vec![f]).unwrap();
        let full = inst.chores();
        assert_eq!(mms_share(&inst, 0, 2, full).unwrap().value, q(1, 1));
        assert_eq!(maximin_share(&inst, 0, 2, full).unwrap().value, q(1, 1));
    }
}
