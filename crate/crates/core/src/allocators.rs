//! Constructive allocation procedures.

use std::borrow::Cow;
use std::cmp::Ordering;

use serde::Serialize;

use crate::allocation::{enumerate_allocations, Allocation};
use crate::chore_set::ChoreSet;
use crate::criteria::{Criterion, Evaluator};
use crate::error::{Error, Result};
use crate::instance::{normalize, Instance};
use crate::mms::maximin_share;
use crate::rational::Rational;

/// Largest `n` for which [`best_round_robin_order`] tries all `n!` orders.
pub const ROUND_ROBIN_ORDER_MAX_AGENTS: usize = 8;

/// One decision taken by an allocator, in the order it was taken.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum TraceRecord {
    Pick { agent: usize, chore: usize },
    /// The algorithm runs with the agents' roles exchanged.
    Relabel { order: Vec<usize> },
    SortedOrder { chores: Vec<usize> },
    Index { name: String, value: usize },
    Case { label: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AllocatorOutcome {
    pub allocation: Allocation,
    pub social_cost: Rational,
    pub trace: Vec<TraceRecord>,
}

impl AllocatorOutcome {
    fn new(inst: &Instance, allocation: Allocation, trace: Vec<TraceRecord>) -> AllocatorOutcome {
        let social_cost = allocation
            .social_cost(inst)
            .expect("allocators produce allocations of the right shape");
        AllocatorOutcome {
            allocation,
            social_cost,
            trace,
        }
    }
}

fn additive_rows<'a>(inst: &'a Instance, what: &str) -> Result<Vec<&'a [Rational]>> {
    inst.additive_values().ok_or_else(|| {
        Error::UnsupportedVariant(format!("{what} needs additive cost functions"))
    })
}

fn is_normalized(inst: &Instance) -> bool {
    inst.is_normalized() || (0..inst.n()).all(|i| inst.total(i) == Rational::ONE)
}

/// Returns `inst` unchanged if it is normalized, its normalization if
/// `auto_normalize` is set, and an error otherwise.
pub fn prepare_normalized<'a>(
    inst: &'a Instance,
    auto_normalize: bool,
    what: &str,
) -> Result<Cow<'a, Instance>> {
    if is_normalized(inst) {
        Ok(Cow::Borrowed(inst))
    } else if auto_normalize {
        Ok(Cow::Owned(normalize(inst)?))
    } else {
        Err(Error::RequiresNormalization(what.into()))
    }
}

fn require_two_additive_normalized<'a>(inst: &'a Instance, what: &str) -> Result<Vec<&'a [Rational]>> {
    if inst.n() != 2 {
        return Err(Error::Argument(format!("{what} needs n = 2, got n = {}", inst.n())));
    }
    let rows = additive_rows(inst, what)?;
    if !is_normalized(inst) {
        return Err(Error::RequiresNormalization(what.into()));
    }
    Ok(rows)
}

/// An allocation of minimum social cost.
///
/// Additive instances give each chore to a cheapest agent (lowest index on
/// ties); other instances are enumerated.
pub fn optimal_allocation(inst: &Instance) -> Result<AllocatorOutcome> {
    if let Some(rows) = inst.additive_values() {
        let assignment: Vec<usize> = (0..inst.m())
            .map(|e| {
                (0..inst.n())
                    .min_by(|&a, &b| rows[a][e].cmp(&rows[b][e]).then(a.cmp(&b)))
                    .unwrap()
            })
            .collect();
        let alloc = Allocation::from_assignment(&assignment, inst.n())?;
        return Ok(AllocatorOutcome::new(inst, alloc, vec![]));
    }
    let mut best: Option<(Rational, Allocation)> = None;
    for alloc in enumerate_allocations(inst.m(), inst.n())? {
        let sc: Rational = alloc
            .bundles()
            .iter()
            .enumerate()
            .map(|(i, b)| inst.eval(i, *b))
            .sum();
        if best.as_ref().is_none_or(|(b, _)| sc < *b) {
            best = Some((sc, alloc));
        }
    }
    let (_, alloc) = best.expect("at least one allocation exists");
    Ok(AllocatorOutcome::new(inst, alloc, vec![]))
}

/// Agents take turns in `order`, each picking a remaining chore of least
/// cost to them (lowest index on ties).
pub fn round_robin(inst: &Instance, order: &[usize]) -> Result<AllocatorOutcome> {
    let rows = additive_rows(inst, "round robin")?;
    check_permutation(order, inst.n())?;
    let (alloc, trace) = round_robin_rows(&rows, inst.m(), order);
    Ok(AllocatorOutcome::new(inst, alloc, trace))
}

fn check_permutation(order: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if order.len() != n {
        return Err(Error::Argument(format!(
            "order has {} entries for {n} agents",
            order.len()
        )));
    }
    for &a in order {
        if a >= n || seen[a] {
            return Err(Error::Argument(format!("order {order:?} is not a permutation of 0..{n}")));
        }
        seen[a] = true;
    }
    Ok(())
}

fn round_robin_rows(rows: &[&[Rational]], m: usize, order: &[usize]) -> (Allocation, Vec<TraceRecord>) {
    let mut left = ChoreSet::full(m);
    let mut bundles = vec![ChoreSet::EMPTY; rows.len()];
    let mut trace = Vec::with_capacity(m);
    'outer: loop {
        for &agent in order {
            let Some(chore) = left.iter().min_by(|&a, &b| rows[agent][a].cmp(&rows[agent][b])) else {
                break 'outer;
            };
            left.remove(chore);
            bundles[agent].insert(chore);
            trace.push(TraceRecord::Pick { agent, chore });
        }
    }
    (Allocation::new(m, bundles).expect("round robin assigns every chore once"), trace)
}

/// Steps `perm` to its lexicographic successor; false after the last one.
fn next_permutation(perm: &mut [usize]) -> bool {
    let Some(i) = (1..perm.len()).rev().find(|&i| perm[i - 1] < perm[i]) else {
        return false;
    };
    let j = (i..perm.len()).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// The cheapest round-robin outcome over all `n!` picking orders.
pub fn best_round_robin_order(inst: &Instance) -> Result<AllocatorOutcome> {
    let rows = additive_rows(inst, "round robin order search")?;
    if !is_normalized(inst) {
        return Err(Error::RequiresNormalization("round robin order search".into()));
    }
    crate::error::size_guard(
        "agents for order search",
        inst.n() as u64,
        ROUND_ROBIN_ORDER_MAX_AGENTS as u64,
    )?;
    let mut order: Vec<usize> = (0..inst.n()).collect();
    let mut best: Option<(Rational, Vec<usize>, Allocation, Vec<TraceRecord>)> = None;
    loop {
        let (alloc, trace) = round_robin_rows(&rows, inst.m(), &order);
        let sc = alloc.social_cost(inst)?;
        if best.as_ref().is_none_or(|b| sc < b.0) {
            best = Some((sc, order.clone(), alloc, trace));
        }
        if !next_permutation(&mut order) {
            break;
        }
    }
    let (_, order, alloc, mut trace) = best.unwrap();
    trace.insert(0, TraceRecord::Relabel { order });
    Ok(AllocatorOutcome::new(inst, alloc, trace))
}

/// Swaps the two agents of a two-agent allocation back and forth.
fn relabel_back(bundles: [ChoreSet; 2], swapped: bool) -> Vec<ChoreSet> {
    if swapped {
        vec![bundles[1], bundles[0]]
    } else {
        bundles.to_vec()
    }
}

/// Two-agent EF1 allocation with social cost at most `5/4` of optimal.
///
/// Postconditions are checked at runtime and reported as internal errors.
pub fn alg1_two_agent_ef1(inst: &Instance) -> Result<AllocatorOutcome> {
    let rows = require_two_additive_normalized(inst, "two-agent EF1 algorithm")?;
    let m = inst.m();
    let mut trace = vec![];

    let e1: Rational = (0..m).filter(|&e| rows[0][e] < rows[1][e]).map(|e| rows[0][e]).sum();
    let e2: Rational = (0..m).filter(|&e| rows[0][e] > rows[1][e]).map(|e| rows[1][e]).sum();
    let swapped = e1 > e2;
    let (c1, c2) = if swapped { (rows[1], rows[0]) } else { (rows[0], rows[1]) };
    if swapped {
        trace.push(TraceRecord::Relabel { order: vec![1, 0] });
    }

    // Zero cost for agent 1 first, zero cost for agent 2 last, ascending c1/c2 between.
    let class = |e: usize| {
        if c1[e].is_zero() {
            0
        } else if c2[e].is_zero() {
            2
        } else {
            1
        }
    };
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| {
        class(a)
            .cmp(&class(b))
            .then_with(|| {
                if class(a) == 1 {
                    (c1[a] * c2[b]).cmp(&(c1[b] * c2[a]))
                } else {
                    Ordering::Equal
                }
            })
            .then(a.cmp(&b))
    });
    trace.push(TraceRecord::SortedOrder { chores: order.clone() });

    // 1-based position of the last chore agent 1 finds strictly cheaper.
    let s = order
        .iter()
        .rposition(|&e| c1[e] < c2[e])
        .map_or(0, |p| p + 1);
    trace.push(TraceRecord::Index { name: "s".into(), value: s });

    let prefix = |k: usize| order[..k].iter().copied().collect::<ChoreSet>();
    let suffix = |k: usize| order[k - 1..].iter().copied().collect::<ChoreSet>();
    let cost = |c: &[Rational], s: ChoreSet| s.iter().map(|e| c[e]).sum::<Rational>();

    let mut ev = Evaluator::new(inst);
    let result = if s == 0 {
        trace.push(TraceRecord::Case { label: "round_robin".into() });
        let local = [c1, c2];
        let (alloc, picks) = round_robin_rows(&local, m, &[0, 1]);
        trace.extend(picks.into_iter().map(|p| match p {
            TraceRecord::Pick { agent, chore } if swapped => TraceRecord::Pick { agent: 1 - agent, chore },
            other => other,
        }));
        [alloc.bundle(0), alloc.bundle(1)]
    } else {
        if s >= m {
            return Err(Error::Internal(format!("index s = {s} is not below m = {m}")));
        }
        let o = [prefix(s), suffix(s + 1)];
        if ev.within(&relabel_back(o, swapped), Criterion::Ef1, Rational::ONE) {
            trace.push(TraceRecord::Case { label: "split_at_s".into() });
            o
        } else {
            let f = (s..=m - 2)
                .rev()
                .find(|&f| cost(c2, suffix(f + 2)) > cost(c2, prefix(f)))
                .ok_or_else(|| Error::Internal("no index f satisfies the shift condition".into()))?;
            trace.push(TraceRecord::Index { name: "f".into(), value: f });
            trace.push(TraceRecord::Case { label: "split_at_f".into() });
            [prefix(f + 1), suffix(f + 2)]
        }
    };

    let alloc = Allocation::new(m, relabel_back(result, swapped))?;
    let out = AllocatorOutcome::new(inst, alloc, trace);
    if !ev.within(out.allocation.bundles(), Criterion::Ef1, Rational::ONE) {
        return Err(Error::Internal("two-agent EF1 algorithm produced a non-EF1 allocation".into()));
    }
    let opt = optimal_allocation(inst)?.social_cost;
    if Rational::from(4) * out.social_cost > Rational::from(5) * opt {
        return Err(Error::Internal(format!(
            "two-agent EF1 algorithm exceeded 5/4 of optimal ({} vs {opt})",
            out.social_cost
        )));
    }
    Ok(out)
}

/// Two-agent `3/2`-PMMS allocation with social cost at most `7/6` of optimal.
pub fn pmms32_two_agent(inst: &Instance) -> Result<AllocatorOutcome> {
    let rows = require_two_additive_normalized(inst, "two-agent 3/2-PMMS construction")?;
    let three_halves = Rational::new(3, 2);
    let m = inst.m();
    let all = inst.chores();
    let opt = optimal_allocation(inst)?;
    let mut ev = Evaluator::new(inst);
    let mut trace = vec![];
    if ev.within(opt.allocation.bundles(), Criterion::Pmms, three_halves) {
        trace.push(TraceRecord::Case { label: "optimal_is_fair".into() });
        return Ok(AllocatorOutcome { trace, ..opt });
    }

    let ob = [opt.allocation.bundle(0), opt.allocation.bundle(1)];
    let shares = [ev.pair_share(0, all), ev.pair_share(1, all)];
    let violates = |i: usize| inst.eval(i, ob[i]) > three_halves * shares[i];
    let violator = match (violates(0), violates(1)) {
        (true, true) if inst.eval(1, ob[1]) > inst.eval(0, ob[0]) => 1,
        (true, _) => 0,
        (false, true) => 1,
        (false, false) => unreachable!("an unfair allocation has a violator"),
    };
    let swapped = violator == 1;
    if swapped {
        trace.push(TraceRecord::Relabel { order: vec![1, 0] });
    }
    let (c1, c2) = if swapped { (rows[1], rows[0]) } else { (rows[0], rows[1]) };
    let (o1, o2) = if swapped { (ob[1], ob[0]) } else { (ob[0], ob[1]) };
    let mms1 = maximin_share(inst, violator, 2, all)?.value;
    let cost = |c: &[Rational], s: ChoreSet| s.iter().map(|e| c[e]).sum::<Rational>();

    // Descending c1/c2; chores nobody pays for go last.
    let class = |e: usize| match (c1[e].is_zero(), c2[e].is_zero()) {
        (false, true) => 0,
        (true, true) => 2,
        _ => 1,
    };
    let mut order = o1.to_vec();
    order.sort_by(|&a, &b| {
        class(a)
            .cmp(&class(b))
            .then_with(|| {
                if class(a) == 1 {
                    (c1[b] * c2[a]).cmp(&(c1[a] * c2[b]))
                } else {
                    Ordering::Equal
                }
            })
            .then(a.cmp(&b))
    });
    trace.push(TraceRecord::SortedOrder { chores: order.clone() });

    let bound = three_halves * mms1;
    let prefix = |k: usize| order[..k].iter().copied().collect::<ChoreSet>();
    let s = (1..=order.len())
        .find(|&k| cost(c1, o1.difference(prefix(k))) <= bound)
        .ok_or_else(|| Error::Internal("no prefix brings the violator within 3/2 of its share".into()))?;
    trace.push(TraceRecord::Index { name: "s".into(), value: s });
    let ls = prefix(s);
    let es = order[s - 1];

    let result = if cost(c1, ls) * Rational::from(2) <= cost(c1, o1) {
        trace.push(TraceRecord::Case { label: "move_prefix".into() });
        [o1.difference(ls), o2.union(ls)]
    } else if c2[es] - c1[es] <= Rational::new(1, 8) {
        trace.push(TraceRecord::Case { label: "move_single".into() });
        [o1.without(es), o2.with(es)]
    } else {
        trace.push(TraceRecord::Case { label: "isolate_single".into() });
        [ChoreSet::singleton(es), all.without(es)]
    };

    let alloc = Allocation::new(m, relabel_back(result, swapped))?;
    let out = AllocatorOutcome::new(inst, alloc, trace);
    if !ev.within(out.allocation.bundles(), Criterion::Pmms, three_halves) {
        return Err(Error::Internal("3/2-PMMS construction produced an unfair allocation".into()));
    }
    if Rational::from(6) * out.social_cost > Rational::from(7) * opt.social_cost {
        return Err(Error::Internal(format!(
            "3/2-PMMS construction exceeded 7/6 of optimal ({} vs {})",
            out.social_cost, opt.social_cost
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::CostFunction;
    use crate::criteria::min_alpha;
    use crate::rational::{q, ExtendedRational};

    fn inst(rows: Vec<Vec<Rational>>) -> Instance {
        let m = rows[0].len();
        Instance::new(m, rows.into_iter().map(CostFunction::additive).collect()).unwrap()
    }

    fn ints(v: &[i128]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from_integer(x)).collect()
    }

    fn set(v: &[usize]) -> ChoreSet {
        v.iter().copied().collect()
    }

    #[test]
    fn optimal_on_example_one() {
        let i = inst(vec![
            ints(&[2, 3, 3, 0, 4, 2, 1]),
            ints(&[3, 1, 3, 2, 5, 0, 5]),
            ints(&[1, 5, 10, 2, 3, 1, 3]),
        ]);
        assert_eq!(optimal_allocation(&i).unwrap().social_cost, q(9, 1));
    }

    #[test]
    fn optimal_by_enumeration() {
        let i = Instance::new(
            3,
            vec![
                CostFunction::CappedCardinality { cap: 1 },
                CostFunction::additive(ints(&[1, 1, 1])),
            ],
        )
        .unwrap();
        let out = optimal_allocation(&i).unwrap();
        assert_eq!(out.social_cost, q(1, 1));
        assert_eq!(out.allocation.bundles(), &[set(&[0, 1, 2]), set(&[])]);
    }

    #[test]
    fn round_robin_hand_simulation() {
        let i = inst(vec![ints(&[3, 2, 1]), ints(&[1, 2, 3])]);
        let out = round_robin(&i, &[0, 1]).unwrap();
        assert_eq!(out.allocation.bundles(), &[set(&[1, 2]), set(&[0])]);
        assert_eq!(
            out.trace,
            vec![
                TraceRecord::Pick { agent: 0, chore: 2 },
                TraceRecord::Pick { agent: 1, chore: 0 },
                TraceRecord::Pick { agent: 0, chore: 1 },
            ]
        );
        assert!(round_robin(&i, &[0]).is_err());
        assert!(round_robin(&i, &[1, 1]).is_err());
    }

    #[test]
    fn permutations_in_order() {
        let mut p = vec![0, 1, 2];
        let mut seen = vec![p.clone()];
        while next_permutation(&mut p) {
            seen.push(p.clone());
        }
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[1], vec![0, 2, 1]);
        assert_eq!(seen[5], vec![2, 1, 0]);
    }

    #[test]
    fn alg1_on_price_instance() {
        let eps = q(1, 100);
        let i = inst(vec![
            vec![q(0, 1), q(1, 2), q(1, 2)],
            vec![q(1, 3) - eps * q(2, 1), q(1, 3) + eps, q(1, 3) + eps],
        ])
        .mark_normalized()
        .unwrap();
        let out = alg1_two_agent_ef1(&i).unwrap();
        assert_eq!(out.social_cost, q(253, 300));
        assert_eq!(min_alpha(&i, &out.allocation, Criterion::Ef1).unwrap(), ExtendedRational::ONE);
    }

    #[test]
    fn alg1_identical_costs_uses_round_robin() {
        let i = inst(vec![vec![q(1, 4); 4], vec![q(1, 4); 4]]);
        let out = alg1_two_agent_ef1(&i).unwrap();
        assert!(out.trace.contains(&TraceRecord::Case { label: "round_robin".into() }));
        assert_eq!(out.allocation.bundles(), &[set(&[0, 2]), set(&[1, 3])]);
    }

    #[test]
    fn alg1_preconditions() {
        let three = inst(vec![ints(&[1]), ints(&[1]), ints(&[1])]);
        assert!(matches!(alg1_two_agent_ef1(&three), Err(Error::Argument(_))));
        let raw = inst(vec![ints(&[1, 2]), ints(&[2, 1])]);
        assert!(matches!(alg1_two_agent_ef1(&raw), Err(Error::RequiresNormalization(_))));
        let prepared = prepare_normalized(&raw, true, "x").unwrap();
        assert!(alg1_two_agent_ef1(&prepared).is_ok());
    }

    #[test]
    fn pmms32_on_price_instance() {
        let eps = q(1, 100);
        let i = inst(vec![
            vec![q(3, 8), q(3, 8) + eps, q(1, 8) - eps, q(1, 8)],
            vec![q(1, 2), q(1, 2), q(0, 1), q(0, 1)],
        ]);
        let out = pmms32_two_agent(&i).unwrap();
        assert_eq!(out.social_cost, q(7, 8));
        assert!(min_alpha(&i, &out.allocation, Criterion::Pmms)
            .unwrap()
            .le_rational(q(3, 2)));
    }

    #[test]
    fn pmms32_keeps_fair_optimum() {
        let i = inst(vec![
            vec![q(1, 2), q(1, 2), q(0, 1)],
            vec![q(0, 1), q(1, 2), q(1, 2)],
        ]);
        let out = pmms32_two_agent(&i).unwrap();
        assert_eq!(out.trace, vec![TraceRecord::Case { label: "optimal_is_fair".into() }]);
        assert_eq!(out.social_cost, optimal_allocation(&i).unwrap().social_cost);
    }

    #[test]
    fn best_order_single_agent() {
        let i = inst(vec![vec![q(1, 3), q(2, 3)]]);
        assert_eq!(best_round_robin_order(&i).unwrap().social_cost, q(1, 1));
    }

    #[test]
    fn trace_json() {
        let t = TraceRecord::Index { name: "s".into(), value: 2 };
        assert_eq!(serde_json::to_string(&t).unwrap(), r#"{"step":"index","name":"s","value":2}"#);
    }
}
