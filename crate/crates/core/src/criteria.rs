//! Minimal approximation factors of an allocation under each fairness notion.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize, Serializer};

use crate::allocation::Allocation;
use crate::chore_set::ChoreSet;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::mms::{maximin_share, subadditive_lower_bound};
use crate::rational::{ExtendedRational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Criterion {
    #[serde(rename = "EF")]
    Ef,
    #[serde(rename = "EF1")]
    Ef1,
    #[serde(rename = "EFX")]
    Efx,
    /// EFX with removal over every chore, including zero-cost ones.
    #[serde(rename = "EFX_STRONG")]
    EfxStrong,
    #[serde(rename = "MMS")]
    Mms,
    #[serde(rename = "PMMS")]
    Pmms,
}

impl Criterion {
    pub const ALL: [Criterion; 6] = [
        Criterion::Ef,
        Criterion::Ef1,
        Criterion::Efx,
        Criterion::EfxStrong,
        Criterion::Mms,
        Criterion::Pmms,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Criterion::Ef => "EF",
            Criterion::Ef1 => "EF1",
            Criterion::Efx => "EFX",
            Criterion::EfxStrong => "EFX_STRONG",
            Criterion::Mms => "MMS",
            Criterion::Pmms => "PMMS",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Criterion> {
        let up = s.trim().to_ascii_uppercase().replace('-', "_");
        Criterion::ALL
            .into_iter()
            .find(|c| c.name() == up)
            .ok_or_else(|| Error::Parse(format!("unknown criterion `{s}`")))
    }
}

/// Where the maximum ratio is attained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub agent: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub other: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chore: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionResult {
    pub criterion: Criterion,
    pub alpha: ExtendedRational,
    /// `None` when every inequality holds exactly.
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FairnessReport {
    pub results: Vec<CriterionResult>,
    /// `MMS_i(n, E)` for agents whose share was needed.
    #[serde(serialize_with = "ser_shares")]
    pub mms_values: Vec<Option<Rational>>,
}

fn ser_shares<S: Serializer>(v: &[Option<Rational>], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter())
}

impl FairnessReport {
    pub fn alpha(&self, crit: Criterion) -> Option<ExtendedRational> {
        self.results
            .iter()
            .find(|r| r.criterion == crit)
            .map(|r| r.alpha)
    }

    /// `{"EF": "7/3", ...}`, keys sorted.
    pub fn alphas_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for r in &self.results {
            map.insert(r.criterion.name().into(), r.alpha.to_string().into());
        }
        serde_json::Value::Object(map)
    }
}

/// Evaluates allocations of one instance, caching maximin shares across calls.
pub struct Evaluator<'a> {
    inst: &'a Instance,
    shares: Vec<Option<Rational>>,
    pair_shares: HashMap<(usize, u64), Rational>,
    lower: Vec<Rational>,
}

impl<'a> Evaluator<'a> {
    pub fn new(inst: &'a Instance) -> Evaluator<'a> {
        let lower = (0..inst.n())
            .map(|i| {
                let f = inst.cost_fn(i);
                if f.is_subadditive_variant() {
                    subadditive_lower_bound(f, inst.n(), inst.chores())
                } else {
                    Rational::ZERO
                }
            })
            .collect();
        Evaluator {
            inst,
            shares: vec![None; inst.n()],
            pair_shares: HashMap::new(),
            lower,
        }
    }

    pub fn instance(&self) -> &'a Instance {
        self.inst
    }

    /// `MMS_i(n, E)`.
    pub fn share(&mut self, agent: usize) -> Rational {
        if let Some(v) = self.shares[agent] {
            return v;
        }
        let v = maximin_share(self.inst, agent, self.inst.n(), self.inst.chores())
            .expect("agent and chores are in range")
            .value;
        self.shares[agent] = Some(v);
        v
    }

    /// `MMS_i(2, S)`.
    pub fn pair_share(&mut self, agent: usize, s: ChoreSet) -> Rational {
        let inst = self.inst;
        *self.pair_shares.entry((agent, s.bits())).or_insert_with(|| {
            maximin_share(inst, agent, 2, s)
                .expect("agent and chores are in range")
                .value
        })
    }

    pub fn cached_shares(&self) -> &[Option<Rational>] {
        &self.shares
    }

    fn check(&self, bundles: &[ChoreSet]) -> Result<()> {
        if bundles.len() != self.inst.n() {
            return Err(Error::Argument(format!(
                "allocation has {} bundles for {} agents",
                bundles.len(),
                self.inst.n()
            )));
        }
        Allocation::new(self.inst.m(), bundles.to_vec())?;
        Ok(())
    }

    pub fn evaluate(&mut self, alloc: &Allocation, crit: Criterion) -> Result<CriterionResult> {
        self.check(alloc.bundles())?;
        Ok(self.evaluate_bundles(alloc.bundles(), crit))
    }

    pub fn min_alpha(&mut self, alloc: &Allocation, crit: Criterion) -> Result<ExtendedRational> {
        Ok(self.evaluate(alloc, crit)?.alpha)
    }

    /// Assumes `bundles` is a valid allocation for the instance.
    pub fn evaluate_bundles(&mut self, bundles: &[ChoreSet], crit: Criterion) -> CriterionResult {
        let mut best = ExtendedRational::ONE;
        let mut witness = None;
        self.scan(bundles, crit, |ratio, w| {
            if ratio > best {
                best = ratio;
                witness = Some(w);
            }
            true
        });
        CriterionResult {
            criterion: crit,
            alpha: best,
            witness,
        }
    }

    /// Whether the allocation is `alpha`-fair; stops at the first violation.
    pub fn within(&mut self, bundles: &[ChoreSet], crit: Criterion, alpha: Rational) -> bool {
        let mut ok = true;
        self.scan_bounded(bundles, crit, Some(alpha), |ratio, _| {
            ok = ratio.le_rational(alpha);
            ok
        });
        ok
    }

    fn scan(
        &mut self,
        bundles: &[ChoreSet],
        crit: Criterion,
        visit: impl FnMut(ExtendedRational, Witness) -> bool,
    ) {
        self.scan_bounded(bundles, crit, None, visit)
    }

    /// Feeds every defining ratio to `visit` until it returns false. With a
    /// `bound`, share computations whose ratio provably stays within it are
    /// skipped.
    fn scan_bounded(
        &mut self,
        bundles: &[ChoreSet],
        crit: Criterion,
        bound: Option<Rational>,
        mut visit: impl FnMut(ExtendedRational, Witness) -> bool,
    ) {
        let inst = self.inst;
        let n = inst.n();
        let slack = bound.unwrap_or(Rational::ONE).max(Rational::ONE);
        for i in 0..n {
            let f = inst.cost_fn(i);
            let own_set = bundles[i];
            let own = f.eval(own_set);
            if own.is_zero() {
                continue;
            }
            if crit == Criterion::Mms {
                if own <= slack * self.lower[i] {
                    continue;
                }
                let share = self.share(i);
                let w = Witness { agent: i, other: None, chore: None };
                if !visit(ExtendedRational::ratio(own, share), w) {
                    return;
                }
                continue;
            }
            for (j, &theirs) in bundles.iter().enumerate() {
                if j == i {
                    continue;
                }
                let w = Witness { agent: i, other: Some(j), chore: None };
                let ratio = match crit {
                    Criterion::Ef => ExtendedRational::ratio(own, f.eval(theirs)),
                    Criterion::Pmms => {
                        let u = own_set.union(theirs);
                        if f.is_subadditive_variant() {
                            let lb = subadditive_lower_bound(f, 2, u);
                            if own <= slack * lb {
                                continue;
                            }
                        }
                        ExtendedRational::ratio(own, self.pair_share(i, u))
                    }
                    _ => {
                        let other = f.eval(theirs);
                        let mut acc: Option<(ExtendedRational, usize)> = None;
                        for e in own_set {
                            if crit == Criterion::Efx && f.single(e).is_zero() {
                                continue;
                            }
                            let r = ExtendedRational::ratio(f.eval(own_set.without(e)), other);
                            let better = match acc {
                                None => true,
                                Some((a, _)) if crit == Criterion::Ef1 => r < a,
                                Some((a, _)) => r > a,
                            };
                            if better {
                                acc = Some((r, e));
                            }
                        }
                        match acc {
                            None => continue,
                            Some((r, e)) => {
                                if !visit(r, Witness { chore: Some(e), ..w }) {
                                    return;
                                }
                                continue;
                            }
                        }
                    }
                };
                if !visit(ratio, w) {
                    return;
                }
            }
        }
    }
}

pub fn evaluate(inst: &Instance, alloc: &Allocation, crit: Criterion) -> Result<CriterionResult> {
    Evaluator::new(inst).evaluate(alloc, crit)
}

/// The smallest `α ≥ 1` for which `alloc` is `α`-`crit`, or infinity.
pub fn min_alpha(inst: &Instance, alloc: &Allocation, crit: Criterion) -> Result<ExtendedRational> {
    Ok(evaluate(inst, alloc, crit)?.alpha)
}

pub fn satisfies(inst: &Instance, alloc: &Allocation, crit: Criterion, alpha: Rational) -> Result<bool> {
    if alpha < Rational::ONE {
        return Err(Error::Argument(format!("alpha must be at least 1, got {alpha}")));
    }
    let mut ev = Evaluator::new(inst);
    ev.check(alloc.bundles())?;
    Ok(ev.within(alloc.bundles(), crit, alpha))
}

/// Evaluates several criteria, sharing maximin computations.
pub fn fairness_report(inst: &Instance, alloc: &Allocation, crits: &[Criterion]) -> Result<FairnessReport> {
    let mut ev = Evaluator::new(inst);
    ev.check(alloc.bundles())?;
    let mut results = Vec::with_capacity(crits.len());
    for &c in crits {
        results.push(ev.evaluate_bundles(alloc.bundles(), c));
    }
    if crits.contains(&Criterion::Mms) {
        for i in 0..inst.n() {
            ev.share(i);
        }
    }
    Ok(FairnessReport {
        results,
        mms_values: ev.cached_shares().to_vec(),
    })
}
