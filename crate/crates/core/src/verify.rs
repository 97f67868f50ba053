//! Verification suites: catalog families against their closed forms, price
//! families and upper bounds against brute force, and lemma sweeps over
//! seeded random instances.
//!
//! Every suite returns [`PropositionReport`] rows instead of failing fast, so
//! one run shows everything that disagrees.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

use rand::Rng;
use serde::Serialize;

use crate::allocation::enumerate_allocations;
use crate::allocators::best_round_robin_order;
use crate::catalog::{default_grid, make_family, FamilyBundle, FamilyId, FamilyKind};
use crate::chore_set::ChoreSet;
use crate::criteria::{Criterion, Evaluator};
use crate::error::{Error, Result};
use crate::implied::{implied_guarantee, trivial_bound, Guarantee, Setting};
use crate::instance::Instance;
use crate::mms::mms_share;
use crate::rational::{q, ExtendedRational, Rational};
use crate::search::{
    best_fair_allocation, derive_seed, parallel_map, random_allocation, random_instance, rng_for,
    RandomSetting,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
}

/// How an observed value must relate to the expected one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Le,
    Ge,
    Gt,
}

impl Relation {
    fn holds(self, observed: ExtendedRational, expected: ExtendedRational) -> bool {
        match self {
            Relation::Eq => observed == expected,
            Relation::Le => observed <= expected,
            Relation::Ge => observed >= expected,
            Relation::Gt => observed > expected,
        }
    }

    fn prefix(self) -> &'static str {
        match self {
            Relation::Eq => "",
            Relation::Le => "<= ",
            Relation::Ge => ">= ",
            Relation::Gt => "> ",
        }
    }
}

/// One checked claim.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropositionReport {
    pub proposition_id: String,
    pub n: Option<usize>,
    pub alpha: Option<Rational>,
    pub epsilon: Option<Rational>,
    pub expected: String,
    pub observed: String,
    pub status: Status,
}

impl PropositionReport {
    pub fn compare(
        id: impl Into<String>,
        params: Params,
        relation: Relation,
        expected: ExtendedRational,
        observed: ExtendedRational,
    ) -> PropositionReport {
        PropositionReport {
            proposition_id: id.into(),
            n: params.n,
            alpha: params.alpha,
            epsilon: params.epsilon,
            expected: format!("{}{expected}", relation.prefix()),
            observed: observed.to_string(),
            status: if relation.holds(observed, expected) {
                Status::Pass
            } else {
                Status::Fail
            },
        }
    }

    /// A row that could not be computed at all.
    pub fn error(id: impl Into<String>, params: Params, expected: impl Into<String>, err: &Error) -> PropositionReport {
        PropositionReport {
            proposition_id: id.into(),
            n: params.n,
            alpha: params.alpha,
            epsilon: params.epsilon,
            expected: expected.into(),
            observed: format!("error: {}: {err}", err.tag()),
            status: Status::Fail,
        }
    }

    /// A zero-violation claim over a sweep.
    pub fn tally(id: impl Into<String>, params: Params, t: Tally) -> PropositionReport {
        PropositionReport {
            proposition_id: id.into(),
            n: params.n,
            alpha: params.alpha,
            epsilon: params.epsilon,
            expected: format!("0 violations in {} checks", t.checks),
            observed: format!("{} violations", t.violations),
            status: if t.violations == 0 { Status::Pass } else { Status::Fail },
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl fmt::Display for PropositionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
        write!(
            f,
            "{:?} {} n={} alpha={} epsilon={} expected {} observed {}",
            self.status,
            self.proposition_id,
            opt(self.n.map(|v| v.to_string())),
            opt(self.alpha.map(|v| v.to_string())),
            opt(self.epsilon.map(|v| v.to_string())),
            self.expected,
            self.observed
        )
    }
}

/// The parameter columns of a report row.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Params {
    pub n: Option<usize>,
    pub alpha: Option<Rational>,
    pub epsilon: Option<Rational>,
}

impl Params {
    fn of(bundle: &FamilyBundle) -> Params {
        Params {
            n: Some(bundle.instance.n()),
            alpha: bundle.params.alpha,
            epsilon: bundle.params.epsilon,
        }
    }

    fn n(n: usize) -> Params {
        Params { n: Some(n), ..Params::default() }
    }
}

/// Sorts rows by proposition id, then parameters.
pub fn sort_canonical(rows: &mut [PropositionReport]) {
    rows.sort_by(|a, b| {
        a.proposition_id
            .cmp(&b.proposition_id)
            .then(a.n.cmp(&b.n))
            .then(a.alpha.cmp(&b.alpha))
            .then(a.epsilon.cmp(&b.epsilon))
    });
}

pub fn all_pass(rows: &[PropositionReport]) -> bool {
    rows.iter().all(PropositionReport::passed)
}

/// Writes rows as CSV with the columns
/// `proposition_id, n, alpha, epsilon, expected, observed, status`.
pub fn write_csv<W: Write>(rows: &[PropositionReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(|e| Error::Internal(format!("csv: {e}")))?;
    }
    w.flush().map_err(|e| Error::Internal(format!("csv: {e}")))?;
    Ok(())
}

/// Violation counter for a sweep.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub checks: u64,
    pub violations: u64,
}

impl Tally {
    pub fn record(&mut self, ok: bool) {
        self.checks += 1;
        if !ok {
            self.violations += 1;
        }
    }

    fn merge(&mut self, other: Tally) {
        self.checks += other.checks;
        self.violations += other.violations;
    }
}

pub fn family_label(b: &FamilyBundle) -> String {
    let mut label = b.family_id.name().to_string();
    let mut extra = Vec::new();
    if let Some(p) = b.params.p {
        extra.push(format!("p={p}"));
    }
    if let Some(m) = b.params.m {
        extra.push(format!("m={m}"));
    }
    if !extra.is_empty() {
        label.push_str(&format!("[{}]", extra.join(",")));
    }
    label
}

/// Builds every grid instantiation of the given families.
pub fn family_grid(families: &[FamilyId], n_max: usize, epsilon: Rational) -> Result<Vec<FamilyBundle>> {
    let mut out = Vec::new();
    for &id in families {
        for p in default_grid(id, n_max, epsilon) {
            out.push(make_family(id, &p)?);
        }
    }
    Ok(out)
}

/// Rows for one family instantiation: the source level, each target ratio,
/// recorded MMS values, the reference cost of price families, and the
/// implied-guarantee bound whenever one is known.
pub fn check_family(bundle: &FamilyBundle) -> Vec<PropositionReport> {
    let label = family_label(bundle);
    let params = Params::of(bundle);
    let mut rows = Vec::new();
    let got = match bundle.measure() {
        Ok(g) => g,
        Err(e) => return vec![PropositionReport::error(format!("{label}:measure"), params, "-", &e)],
    };
    let expected = |key: &str| bundle.expected(key).expect("family records its key");
    rows.push(PropositionReport::compare(
        format!("{label}:source_{}", bundle.source),
        params,
        Relation::Eq,
        expected("source_alpha"),
        got.source_alpha,
    ));
    for &(t, v) in &got.targets {
        rows.push(PropositionReport::compare(
            format!("{label}:target_{t}"),
            params,
            Relation::Eq,
            bundle.expected_target(t).expect("targets have expectations"),
            v,
        ));
    }
    for (agent, v) in &got.mms {
        rows.push(PropositionReport::compare(
            format!("{label}:mms_{agent}"),
            params,
            Relation::Eq,
            expected(&format!("mms_{agent}")),
            (*v).into(),
        ));
    }
    if bundle.kind == FamilyKind::Price {
        rows.push(PropositionReport::compare(
            format!("{label}:reference_cost"),
            params,
            Relation::Eq,
            expected("fair_cost"),
            got.social_cost.into(),
        ));
    }
    // The measured source level feeds the implication table.
    if let Some(a) = got.source_alpha.finite() {
        let n = bundle.instance.n();
        for &(t, v) in &got.targets {
            let bound = match implied_guarantee(bundle.source, a, t, n, bundle.setting) {
                Ok(Guarantee::Bound(b)) => Some(b),
                Ok(Guarantee::TrivialOnly) => trivial_bound(t, n),
                _ => None,
            };
            if let Some(b) = bound {
                rows.push(PropositionReport::compare(
                    format!("{label}:implied_{}_{t}", bundle.source),
                    params,
                    Relation::Le,
                    b.into(),
                    v,
                ));
            }
        }
    }
    rows
}

/// Checks every family at `n ≤ n_max` and the default `α`, `ε` and `p` grid.
pub fn verify_connections(families: &[FamilyId], n_max: usize, epsilon: Rational) -> Result<Vec<PropositionReport>> {
    let bundles = family_grid(families, n_max, epsilon)?;
    let mut rows: Vec<PropositionReport> = parallel_map(bundles.len(), |k| check_family(&bundles[k]))
        .into_iter()
        .flatten()
        .collect();
    sort_canonical(&mut rows);
    Ok(rows)
}

/// Brute-force price rows for one price family: OPT, cheapest fair cost and
/// price for the primary fairness level, and a lower-bound row for each
/// stricter notion listed after it.
pub fn check_price_family(bundle: &FamilyBundle) -> Vec<PropositionReport> {
    let label = family_label(bundle);
    let mut rows = Vec::new();
    for (k, level) in bundle.fairness.iter().enumerate() {
        let params = Params {
            alpha: Some(level.alpha),
            ..Params::of(bundle)
        };
        let id = |what: &str| format!("{label}:{what}_{}", level.criterion);
        let report = match best_fair_allocation(&bundle.instance, level.criterion, level.alpha) {
            Ok(r) => r,
            Err(e) => {
                rows.push(PropositionReport::error(id("price"), params, "-", &e));
                continue;
            }
        };
        let price = report.price.unwrap_or(ExtendedRational::Infinity);
        let expected_price = bundle.expected("price").expect("price families record a price");
        if k == 0 {
            let expect = |key: &str| bundle.expected(key).expect("price families record costs");
            rows.push(PropositionReport::compare(
                id("opt_cost"),
                params,
                Relation::Eq,
                expect("opt_cost"),
                report.opt_cost.into(),
            ));
            let fair = report
                .best_fair_cost
                .map(ExtendedRational::from)
                .unwrap_or(ExtendedRational::Infinity);
            rows.push(PropositionReport::compare(id("fair_cost"), params, Relation::Eq, expect("fair_cost"), fair));
            rows.push(PropositionReport::compare(id("price"), params, Relation::Eq, expected_price, price));
        } else {
            rows.push(PropositionReport::compare(id("price"), params, Relation::Ge, expected_price, price));
        }
    }
    rows
}

/// Summary of a price sweep over random instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PriceSweep {
    pub instances: usize,
    /// Instances without any fair allocation; excluded from `max_price`.
    pub no_fair: usize,
    pub max_price: Option<ExtendedRational>,
    pub min_price: Option<ExtendedRational>,
}

/// A reproducible normalized additive instance for sweep item `index`,
/// with `m` uniform in `m_range`.
pub fn sweep_instance(seed: u64, index: u64, n: usize, m_range: (usize, usize)) -> Instance {
    let s = derive_seed(seed, index);
    let m = rng_for(s).gen_range(m_range.0..=m_range.1);
    random_instance(n, m, RandomSetting::Additive, derive_seed(s, 1)).expect("sweep bounds are valid")
}

/// Brute-force prices of `alpha`-`crit` over `count` random normalized
/// additive instances.
pub fn price_sweep(
    crit: Criterion,
    alpha: Rational,
    n: usize,
    m_range: (usize, usize),
    count: usize,
    seed: u64,
) -> Result<PriceSweep> {
    let prices = parallel_map(count, |k| {
        let inst = sweep_instance(seed, k as u64, n, m_range);
        best_fair_allocation(&inst, crit, alpha).map(|r| r.price)
    });
    let mut sweep = PriceSweep {
        instances: count,
        no_fair: 0,
        max_price: None,
        min_price: None,
    };
    for p in prices {
        match p? {
            None => sweep.no_fair += 1,
            Some(p) => {
                sweep.max_price = Some(sweep.max_price.map_or(p, |m| m.max(p)));
                sweep.min_price = Some(sweep.min_price.map_or(p, |m| m.min(p)));
            }
        }
    }
    Ok(sweep)
}

/// Settings of the price suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PriceConfig {
    pub epsilon: Rational,
    pub seed: u64,
    /// Random instances per upper-bound sweep.
    pub sweep: usize,
    pub m_max: usize,
    /// Largest `n` for the `n`-parameterized price families.
    pub n_max: usize,
}

impl Default for PriceConfig {
    fn default() -> Self {
        PriceConfig {
            epsilon: q(1, 1000),
            seed: 1,
            sweep: 2000,
            m_max: 8,
            n_max: 4,
        }
    }
}

/// Upper-bound claims for two agents, checked by sweeping: `(criterion,
/// level, bound, relation)`. The last one is an equality: the optimum is
/// always 2-MMS with two agents.
pub fn two_agent_price_claims() -> Vec<(Criterion, Rational, Rational, Relation)> {
    use Criterion::*;
    vec![
        (Ef1, Rational::ONE, q(5, 4), Relation::Le),
        (Pmms, q(3, 2), q(7, 6), Relation::Le),
        (Pmms, Rational::ONE, q(2, 1), Relation::Le),
        (Mms, Rational::ONE, q(2, 1), Relation::Le),
        (Efx, Rational::ONE, q(2, 1), Relation::Le),
        (Mms, q(2, 1), Rational::ONE, Relation::Eq),
    ]
}

pub fn verify_prices(cfg: &PriceConfig) -> Result<Vec<PropositionReport>> {
    let price_families: Vec<FamilyId> = FamilyId::ALL
        .iter()
        .copied()
        .filter(|f| f.kind() == FamilyKind::Price)
        .collect();
    let bundles = family_grid(&price_families, cfg.n_max, cfg.epsilon)?;
    let mut rows: Vec<PropositionReport> = parallel_map(bundles.len(), |k| check_price_family(&bundles[k]))
        .into_iter()
        .flatten()
        .collect();
    for (crit, alpha, bound, rel) in two_agent_price_claims() {
        let params = Params {
            n: Some(2),
            alpha: Some(alpha),
            epsilon: None,
        };
        let id = format!("PRICE_SWEEP_N2:{crit}");
        match price_sweep(crit, alpha, 2, (1, cfg.m_max), cfg.sweep, cfg.seed) {
            Ok(s) => {
                // Prices are at least 1, so a maximum of 1 settles the equality claim too.
                let observed = s.max_price.unwrap_or(ExtendedRational::ONE);
                rows.push(PropositionReport::compare(id, params, rel, bound.into(), observed));
            }
            Err(e) => rows.push(PropositionReport::error(id, params, bound.to_string(), &e)),
        }
    }
    let rr = round_robin_sweep(3, (9, 9), 200, cfg.seed)?;
    rows.push(PropositionReport::compare(
        "BEST_RR_ORDER:social_cost",
        Params::n(3),
        Relation::Le,
        ExtendedRational::ONE,
        rr.into(),
    ));
    sort_canonical(&mut rows);
    Ok(rows)
}

/// Largest social cost of [`best_round_robin_order`] over a sweep.
pub fn round_robin_sweep(n: usize, m_range: (usize, usize), count: usize, seed: u64) -> Result<Rational> {
    let costs = parallel_map(count, |k| {
        let inst = sweep_instance(seed, k as u64, n, m_range);
        best_round_robin_order(&inst).map(|o| o.social_cost)
    });
    let mut worst = Rational::ZERO;
    for c in costs {
        worst = worst.max(c?);
    }
    Ok(worst)
}

/// Per-lemma tallies of a random sweep.
pub type LemmaTallies = BTreeMap<&'static str, Tally>;

pub const LEMMA_LOWER_BOUNDS: &str = "LEMMA_MMS_LOWER_BOUNDS";
pub const LEMMA_TRIVIAL: &str = "LEMMA_TRIVIAL_2PMMS_NMMS";
pub const LEMMA_MONOTONE: &str = "LEMMA_MONOTONE_MMS";
pub const LEMMA_TWO_CHORE_BLOCK: &str = "LEMMA_TWO_CHORE_BLOCK";
pub const LEMMA_UNION_SHARE: &str = "LEMMA_UNION_SHARE";

/// Random instance `index` of the lemma sweep: settings rotate through
/// [`RandomSetting::ALL`], `n ∈ [2, 4]`, `m ∈ [1, 8]`.
pub fn lemma_instance(seed: u64, index: u64) -> Instance {
    let setting = RandomSetting::ALL[(index % 4) as usize];
    let s = derive_seed(seed, index);
    let mut rng = rng_for(s);
    let n = rng.gen_range(2..=4);
    let m = rng.gen_range(1..=8);
    random_instance(n, m, setting, derive_seed(s, 1)).expect("sweep bounds are valid")
}

/// Number of random allocations drawn per lemma-sweep instance.
pub const ALLOCATIONS_PER_INSTANCE: usize = 3;

fn share(inst: &Instance, agent: usize, k: usize, s: ChoreSet) -> crate::mms::MmsResult {
    mms_share(inst, agent, k, s).expect("sweep sizes are within the enumeration guards")
}

/// Runs every lemma check on one instance and a few random allocations.
pub fn lemma_checks(inst: &Instance, seed: u64) -> LemmaTallies {
    let mut t = LemmaTallies::new();
    let n = inst.n();
    let e_all = inst.chores();
    let additive = inst.all_additive();
    let mut rng = rng_for(seed);
    let mut ev = Evaluator::new(inst);
    for _ in 0..ALLOCATIONS_PER_INSTANCE {
        let alloc = random_allocation(&mut rng, n, inst.m());
        let bundles = alloc.bundles();

        let pmms = ev.evaluate_bundles(bundles, Criterion::Pmms).alpha;
        let mms = ev.evaluate_bundles(bundles, Criterion::Mms).alpha;
        let trivial = t.entry(LEMMA_TRIVIAL).or_default();
        trivial.record(pmms.le_rational(Rational::from(2)));
        trivial.record(mms.le_rational(Rational::from(n)));

        for i in 0..n {
            let f = inst.cost_fn(i);
            let own = bundles[i];
            for s in [e_all, own] {
                for k in 1..=n {
                    let v = share(inst, i, k, s).value;
                    let lb = t.entry(LEMMA_LOWER_BOUNDS).or_default();
                    lb.record(v >= f.eval(s) / Rational::from(k));
                    lb.record(s.iter().all(|e| v >= f.single(e)));
                }
            }
            for (j, &theirs) in bundles.iter().enumerate() {
                if j == i {
                    continue;
                }
                let union = own.union(theirs);
                let small = share(inst, i, 2, own).value;
                let mid = share(inst, i, 2, union);
                let big = share(inst, i, 2, e_all).value;
                let mono = t.entry(LEMMA_MONOTONE).or_default();
                mono.record(small <= mid.value);
                mono.record(mid.value <= big);

                if additive {
                    two_chore_block(inst, i, union, &mid, t.entry(LEMMA_TWO_CHORE_BLOCK).or_default());
                    let u = t.entry(LEMMA_UNION_SHARE).or_default();
                    if mid.value > small {
                        u.record(mid.value <= f.eval(own) / Rational::from(2) + f.eval(theirs));
                    } else {
                        u.record(true);
                    }
                }
            }
        }
    }
    t
}

/// If a costliest block of the optimal 2-partition holds at least two
/// chores of positive cost, then `c(S) / MMS(2, S) ≥ 3/2`.
///
/// Chores of zero cost are not counted: `S = {x, z}` with `c(z) = 0` has the
/// optimal partition `({x, z}, ∅)` and ratio 1.
fn two_chore_block(inst: &Instance, agent: usize, s: ChoreSet, res: &crate::mms::MmsResult, t: &mut Tally) {
    let f = inst.cost_fn(agent);
    if res.value.is_zero() {
        return;
    }
    for block in &res.witness {
        if f.eval(*block) != res.value {
            continue;
        }
        let positive = block.iter().filter(|&e| f.single(e).is_positive()).count();
        if positive >= 2 {
            t.record(f.eval(s) / res.value >= q(3, 2));
        }
    }
}

/// Lemma checks over `count` random instances, summed per lemma.
pub fn lemma_sweep(seed: u64, count: usize) -> LemmaTallies {
    let per = parallel_map(count, |k| {
        let inst = lemma_instance(seed, k as u64);
        lemma_checks(&inst, derive_seed(seed ^ 0x5eed, k as u64))
    });
    let mut total = LemmaTallies::new();
    for t in per {
        for (k, v) in t {
            total.entry(k).or_default().merge(v);
        }
    }
    total
}

/// For every pair with a finite table entry, `min_alpha(dst)` stays within
/// the bound implied by the measured `min_alpha(src)`. Additive sweep
/// instances only.
pub fn implication_checks(inst: &Instance, seed: u64) -> Tally {
    let mut t = Tally::default();
    let n = inst.n();
    if n < 2 || !inst.all_additive() {
        return t;
    }
    let mut rng = rng_for(seed);
    let mut ev = Evaluator::new(inst);
    let crits = [Criterion::Ef, Criterion::Ef1, Criterion::Efx, Criterion::Mms, Criterion::Pmms];
    for _ in 0..ALLOCATIONS_PER_INSTANCE {
        let alloc = random_allocation(&mut rng, n, inst.m());
        let alphas: Vec<ExtendedRational> = crits
            .iter()
            .map(|&c| ev.evaluate_bundles(alloc.bundles(), c).alpha)
            .collect();
        for (si, &src) in crits.iter().enumerate() {
            let Some(a) = alphas[si].finite() else { continue };
            for (di, &dst) in crits.iter().enumerate() {
                if si == di {
                    continue;
                }
                let bound = match implied_guarantee(src, a, dst, n, Setting::Additive) {
                    Ok(Guarantee::Bound(b)) => b,
                    Ok(Guarantee::TrivialOnly) => match trivial_bound(dst, n) {
                        Some(b) => b,
                        None => continue,
                    },
                    _ => continue,
                };
                t.record(alphas[di].le_rational(bound));
            }
        }
    }
    t
}

/// [`implication_checks`] over the additive instances of the lemma sweep.
pub fn implication_sweep(seed: u64, count: usize) -> Tally {
    let per = parallel_map(count, |k| {
        let inst = lemma_instance(seed, k as u64);
        implication_checks(&inst, derive_seed(seed ^ 0x1a1a, k as u64))
    });
    let mut total = Tally::default();
    for t in per {
        total.merge(t);
    }
    total
}

/// Every exactly-PMMS allocation of an additive instance is exactly EFX.
pub fn pmms_implies_efx(inst: &Instance) -> Result<Tally> {
    let mut t = Tally::default();
    let mut ev = Evaluator::new(inst);
    for alloc in enumerate_allocations(inst.m(), inst.n())? {
        if ev.within(alloc.bundles(), Criterion::Pmms, Rational::ONE) {
            t.record(ev.within(alloc.bundles(), Criterion::Efx, Rational::ONE));
        }
    }
    Ok(t)
}

/// [`pmms_implies_efx`] over random normalized instances with `n ∈ [2, 3]`
/// and `m ∈ [1, 7]`.
pub fn pmms_efx_sweep(seed: u64, count: usize) -> Result<Tally> {
    let per = parallel_map(count, |k| {
        let s = derive_seed(seed, k as u64);
        let n = rng_for(s).gen_range(2..=3);
        let inst = sweep_instance(s, 0, n, (1, 7));
        pmms_implies_efx(&inst)
    });
    let mut total = Tally::default();
    for t in per {
        total.merge(t?);
    }
    Ok(total)
}

/// Settings of the lemma suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LemmaConfig {
    pub seed: u64,
    pub instances: usize,
    pub pmms_efx_instances: usize,
}

impl Default for LemmaConfig {
    fn default() -> Self {
        LemmaConfig {
            seed: 1,
            instances: 1000,
            pmms_efx_instances: 200,
        }
    }
}

pub fn verify_lemmas(cfg: &LemmaConfig) -> Result<Vec<PropositionReport>> {
    let mut rows: Vec<PropositionReport> = lemma_sweep(cfg.seed, cfg.instances)
        .into_iter()
        .map(|(id, t)| PropositionReport::tally(id, Params::default(), t))
        .collect();
    rows.push(PropositionReport::tally(
        "IMPLIED_GUARANTEE_SOUNDNESS",
        Params::default(),
        implication_sweep(cfg.seed, cfg.instances),
    ));
    rows.push(PropositionReport::tally(
        "PMMS_IMPLIES_EFX",
        Params::default(),
        pmms_efx_sweep(cfg.seed, cfg.pmms_efx_instances)?,
    ));
    sort_canonical(&mut rows);
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::CostFunction;
    use crate::rational::q;

    #[test]
    fn zero_cost_chore_breaks_the_literal_two_chore_statement() {
        let inst = Instance::new(2, vec![CostFunction::additive([q(1, 1), q(0, 1)])]).unwrap();
        let res = mms_share(&inst, 0, 2, inst.chores()).unwrap();
        assert_eq!(res.value, q(1, 1));
        // The optimal block {x, z} has two chores, yet c(S)/MMS = 1 < 3/2.
        let both = ChoreSet::full(2);
        assert_eq!(res.witness[0], both);
        assert_eq!(inst.eval(0, both) / res.value, q(1, 1));
        let mut t = Tally::default();
        two_chore_block(&inst, 0, both, &res, &mut t);
        assert_eq!(t.violations, 0);
    }

    #[test]
    fn connections_small_grid_pass() {
        let rows = verify_connections(FamilyId::ALL, 3, q(1, 1000)).unwrap();
        let bad: Vec<String> = rows.iter().filter(|r| !r.passed()).map(|r| r.to_string()).collect();
        assert!(bad.is_empty(), "{bad:#?}");
        assert!(rows.iter().any(|r| r.proposition_id == "PMMS_MMS_N3_TIGHT:target_MMS"));
    }

    #[test]
    fn lemma_sweep_small() {
        let t = lemma_sweep(3, 24);
        for (k, v) in &t {
            assert_eq!(v.violations, 0, "{k}");
        }
        assert!(t[LEMMA_LOWER_BOUNDS].checks > 0);
    }

    #[test]
    fn csv_has_the_documented_columns() {
        let row = PropositionReport::compare(
            "X",
            Params::n(2),
            Relation::Le,
            q(5, 4).into(),
            q(1, 1).into(),
        );
        let mut buf = Vec::new();
        write_csv(&[row], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "proposition_id,n,alpha,epsilon,expected,observed,status\nX,2,,,<= 5/4,1,pass\n"
        );
    }
}
