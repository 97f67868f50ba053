//! Instance families from the tightness and price-of-fairness arguments.
//!
//! Every family comes with a reference allocation and the closed-form values
//! it is supposed to exhibit, so the measured numbers can be compared exactly.
//! Chores are described 1-based in the comments (as `e1, e2, ...`) and stored
//! 0-based.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::allocation::Allocation;
use crate::chore_set::{ChoreSet, MAX_CHORES};
use crate::cost::CostFunction;
use crate::criteria::{Criterion, Evaluator};
use crate::error::{Error, Result};
use crate::implied::Setting;
use crate::instance::Instance;
use crate::rational::{q, ExtendedRational, Rational};

macro_rules! families {
    ($($variant:ident => $name:literal,)*) => {
        /// Identifier of a catalog family.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum FamilyId {
            $(#[serde(rename = $name)] $variant,)*
        }

        impl FamilyId {
            pub const ALL: &'static [FamilyId] = &[$(FamilyId::$variant,)*];

            pub fn name(self) -> &'static str {
                match self {
                    $(FamilyId::$variant => $name,)*
                }
            }
        }
    };
}

families! {
    EfMmsTight => "EF_MMS_TIGHT",
    EfPmmsTight => "EF_PMMS_TIGHT",
    Ef1NotEfx => "EF1_NOT_EFX",
    Ef1MmsTight => "EF1_MMS_TIGHT",
    EfxMmsLbA => "EFX_MMS_LB_A",
    EfxMmsLbB => "EFX_MMS_LB_B",
    EfxPmmsTight => "EFX_PMMS_TIGHT",
    Ef1PmmsTight => "EF1_PMMS_TIGHT",
    PmmsNotEf1 => "PMMS_NOT_EF1",
    PmmsMmsN3Tight => "PMMS_MMS_N3_TIGHT",
    PmmsMmsLb => "PMMS_MMS_LB",
    ApmmsMmsLb => "APMMS_MMS_LB",
    MmsNotPmms => "MMS_NOT_PMMS",
    MmsNotEf1 => "MMS_NOT_EF1",
    SubEfCoverage => "SUB_EF_COVERAGE",
    SubPmmsCapped => "SUB_PMMS_CAPPED",
    SubPmmsMmsTight => "SUB_PMMS_MMS_TIGHT",
    PofEf1N2 => "POF_EF1_N2",
    PofPmms32N2 => "POF_PMMS32_N2",
    PofPmmsN2 => "POF_PMMS_N2",
    PofN3Unbounded => "POF_N3_UNBOUNDED",
    PofMmsLb => "POF_MMS_LB",
    Pof2MmsLb => "POF_2MMS_LB",
    SubPofEfx => "SUB_POF_EFX",
    SubPofEf1 => "SUB_POF_EF1",
    SubPofPmms => "SUB_POF_PMMS",
    SubPofPmms32 => "SUB_POF_PMMS32",
}

/// What a family is meant to demonstrate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    /// A reference allocation that is `α`-fair for one criterion and
    /// measurably unfair for others.
    Connection,
    /// An instance whose cheapest fair allocation is expensive compared to OPT.
    Price,
}

impl FamilyId {
    pub fn kind(self) -> FamilyKind {
        if self.name().contains("POF_") {
            FamilyKind::Price
        } else {
            FamilyKind::Connection
        }
    }

    pub fn setting(self) -> Setting {
        if self.name().starts_with("SUB_") {
            Setting::Submodular
        } else {
            Setting::Additive
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let wanted = s.trim().replace('-', "_").to_ascii_uppercase();
        FamilyId::ALL
            .iter()
            .copied()
            .find(|f| f.name() == wanted)
            .ok_or_else(|| Error::Parse(format!("unknown family '{s}'")))
    }
}

/// Family parameters. Unset fields take the family's default; setting a
/// field the family does not use is an error.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
}

impl FamilyParams {
    pub fn with_n(mut self, n: usize) -> Self {
        self.n = Some(n);
        self
    }

    pub fn with_alpha(mut self, alpha: Rational) -> Self {
        self.alpha = Some(alpha);
        self
    }

    pub fn with_epsilon(mut self, epsilon: Rational) -> Self {
        self.epsilon = Some(epsilon);
        self
    }

    pub fn with_p(mut self, p: u32) -> Self {
        self.p = Some(p);
        self
    }

    pub fn with_m(mut self, m: usize) -> Self {
        self.m = Some(m);
        self
    }
}

/// A criterion at an approximation level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Level {
    pub criterion: Criterion,
    pub alpha: Rational,
}

/// A family instantiated at concrete parameters.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyBundle {
    pub family_id: FamilyId,
    pub kind: FamilyKind,
    pub setting: Setting,
    /// The effective parameters, defaults filled in.
    pub params: FamilyParams,
    pub instance: Instance,
    pub reference_allocation: Allocation,
    /// Criterion the reference allocation is fair (or `α`-fair) for.
    pub source: Criterion,
    /// Criteria whose ratio on the reference allocation is the point of the family.
    pub targets: Vec<Criterion>,
    /// For price families: the fairness notion(s) the price is about. The
    /// first entry is the one `expected.price` refers to; later entries are
    /// stricter notions whose price can only be larger.
    pub fairness: Vec<Level>,
    /// Closed-form values at these parameters. Keys: `source_alpha`,
    /// `target_ratio_<CRIT>`, `mms_<agent>` (1-based), and for price families
    /// `opt_cost`, `fair_cost`, `price`.
    pub expected: BTreeMap<String, ExtendedRational>,
}

impl FamilyBundle {
    pub fn expected(&self, key: &str) -> Option<ExtendedRational> {
        self.expected.get(key).copied()
    }

    pub fn expected_target(&self, crit: Criterion) -> Option<ExtendedRational> {
        self.expected(&target_key(crit))
    }

    /// Measures the reference allocation with the criteria engine.
    pub fn measure(&self) -> Result<Measurement> {
        let mut ev = Evaluator::new(&self.instance);
        let alloc = &self.reference_allocation;
        let source_alpha = ev.min_alpha(alloc, self.source)?;
        let mut targets = Vec::with_capacity(self.targets.len());
        for &t in &self.targets {
            targets.push((t, ev.min_alpha(alloc, t)?));
        }
        let mut mms = BTreeMap::new();
        for key in self.expected.keys() {
            if let Some(agent) = key.strip_prefix("mms_").and_then(|a| a.parse::<usize>().ok()) {
                mms.insert(agent, ev.share(agent - 1));
            }
        }
        Ok(Measurement {
            source_alpha,
            targets,
            mms,
            social_cost: alloc.social_cost(&self.instance)?,
        })
    }
}

/// Measured counterparts of a bundle's expected values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Measurement {
    pub source_alpha: ExtendedRational,
    pub targets: Vec<(Criterion, ExtendedRational)>,
    /// 1-based agent to `MMS_i(n, E)`.
    pub mms: BTreeMap<usize, Rational>,
    pub social_cost: Rational,
}

impl Measurement {
    pub fn target(&self, crit: Criterion) -> Option<ExtendedRational> {
        self.targets.iter().find(|(c, _)| *c == crit).map(|(_, v)| *v)
    }
}

pub fn target_key(crit: Criterion) -> String {
    format!("target_ratio_{}", crit.name())
}

/// Builds family `id` at `params`.
pub fn make_family(id: FamilyId, params: &FamilyParams) -> Result<FamilyBundle> {
    let mut b = Builder::new(id, params);
    build(&mut b)?;
    b.finish()
}

/// Largest ε accepted by the families that take one. The closed forms assume
/// ε is small next to every other cost in the construction.
pub fn epsilon_max() -> Rational {
    q(1, 100)
}

fn r(v: i128) -> Rational {
    Rational::from_integer(v)
}

fn ri(v: usize) -> Rational {
    Rational::from_integer(v as i128)
}

/// `{e_lo, ..., e_hi}`, 1-based and inclusive.
fn span(lo: usize, hi: usize) -> ChoreSet {
    if hi < lo {
        ChoreSet::EMPTY
    } else {
        ChoreSet::range(lo - 1, hi)
    }
}

/// Chores by 1-based index.
fn set(items: &[usize]) -> ChoreSet {
    items.iter().fold(ChoreSet::EMPTY, |s, &e| s.with(e - 1))
}

/// Additive cost 0 on `own` and 1 on every other chore.
fn indicator(m: usize, own: ChoreSet) -> CostFunction {
    CostFunction::additive((0..m).map(|e| if own.contains(e) { Rational::ZERO } else { Rational::ONE }))
}

struct Builder<'a> {
    id: FamilyId,
    given: &'a FamilyParams,
    used: FamilyParams,
    m: usize,
    costs: Vec<CostFunction>,
    bundles: Vec<ChoreSet>,
    source: Option<Criterion>,
    targets: Vec<Criterion>,
    fairness: Vec<Level>,
    expected: BTreeMap<String, ExtendedRational>,
}

impl<'a> Builder<'a> {
    fn new(id: FamilyId, given: &'a FamilyParams) -> Self {
        Builder {
            id,
            given,
            used: FamilyParams::default(),
            m: 0,
            costs: Vec::new(),
            bundles: Vec::new(),
            source: None,
            targets: Vec::new(),
            fairness: Vec::new(),
            expected: BTreeMap::new(),
        }
    }

    fn fail<T>(&self, constraint: impl Into<String>) -> Result<T> {
        Err(Error::FamilyParam {
            family: self.id.name().to_string(),
            constraint: constraint.into(),
        })
    }

    fn require(&self, ok: bool, constraint: &str) -> Result<()> {
        if ok {
            Ok(())
        } else {
            self.fail(constraint)
        }
    }

    fn n(&mut self, default: usize, min: usize) -> Result<usize> {
        let n = self.given.n.unwrap_or(default);
        if n < min {
            return self.fail(format!("n >= {min} (got {n})"));
        }
        self.used.n = Some(n);
        Ok(n)
    }

    fn fixed_n(&mut self, n: usize) -> Result<usize> {
        if let Some(got) = self.given.n {
            if got != n {
                return self.fail(format!("n = {n} (got {got})"));
            }
        }
        self.used.n = Some(n);
        Ok(n)
    }

    fn alpha(&mut self, default: Rational) -> Result<Rational> {
        let a = self.given.alpha.unwrap_or(default);
        if a < Rational::ONE {
            return self.fail(format!("alpha >= 1 (got {a})"));
        }
        self.used.alpha = Some(a);
        Ok(a)
    }

    fn epsilon(&mut self) -> Result<Rational> {
        let e = self.given.epsilon.unwrap_or(q(1, 100));
        if !e.is_positive() || e > epsilon_max() {
            return self.fail(format!("0 < epsilon <= {} (got {e})", epsilon_max()));
        }
        self.used.epsilon = Some(e);
        Ok(e)
    }

    fn p(&mut self, default: u32, min: u32) -> Result<u32> {
        let p = self.given.p.unwrap_or(default);
        if p < min {
            return self.fail(format!("p >= {min} (got {p})"));
        }
        self.used.p = Some(p);
        Ok(p)
    }

    fn m(&mut self, default: usize, min: usize) -> Result<usize> {
        let m = self.given.m.unwrap_or(default);
        if m < min {
            return self.fail(format!("m >= {min} (got {m})"));
        }
        self.used.m = Some(m);
        Ok(m)
    }

    fn chores(&mut self, m: usize) -> Result<()> {
        if m > MAX_CHORES {
            return self.fail(format!("the construction needs {m} chores, more than {MAX_CHORES}"));
        }
        self.m = m;
        Ok(())
    }

    fn identical(&mut self, n: usize, f: CostFunction) {
        self.costs = vec![f; n];
    }

    fn expect(&mut self, key: &str, v: impl Into<ExtendedRational>) {
        self.expected.insert(key.to_string(), v.into());
    }

    fn connection(&mut self, source: Criterion, source_alpha: Rational, targets: &[(Criterion, ExtendedRational)]) {
        self.source = Some(source);
        self.expect("source_alpha", source_alpha);
        for &(t, v) in targets {
            self.targets.push(t);
            self.expected.insert(target_key(t), v);
        }
    }

    fn price(&mut self, fairness: &[(Criterion, Rational)], source_alpha: Rational, opt: Rational, fair: Rational) {
        self.fairness = fairness
            .iter()
            .map(|&(criterion, alpha)| Level { criterion, alpha })
            .collect();
        self.source = Some(fairness[0].0);
        self.expect("source_alpha", source_alpha);
        self.expect("opt_cost", opt);
        self.expect("fair_cost", fair);
        self.expect("price", ExtendedRational::ratio(fair, opt));
    }

    fn finish(self) -> Result<FamilyBundle> {
        let unused = [
            ("n", self.given.n.is_some() && self.used.n.is_none()),
            ("alpha", self.given.alpha.is_some() && self.used.alpha.is_none()),
            ("epsilon", self.given.epsilon.is_some() && self.used.epsilon.is_none()),
            ("p", self.given.p.is_some() && self.used.p.is_none()),
            ("m", self.given.m.is_some() && self.used.m.is_none()),
        ];
        if let Some((name, _)) = unused.iter().find(|(_, bad)| *bad) {
            return self.fail(format!("takes no parameter {name}"));
        }
        let wrap = |e: Error| Error::Internal(format!("{} built an invalid instance: {e}", self.id));
        let instance = Instance::new(self.m, self.costs).map_err(wrap)?;
        let reference_allocation = Allocation::new(self.m, self.bundles).map_err(wrap)?;
        if reference_allocation.n() != instance.n() {
            return Err(Error::Internal(format!("{}: bundle count mismatch", self.id)));
        }
        Ok(FamilyBundle {
            family_id: self.id,
            kind: self.id.kind(),
            setting: self.id.setting(),
            params: self.used,
            instance,
            reference_allocation,
            source: self.source.expect("every family sets its source"),
            targets: self.targets,
            fairness: self.fairness,
            expected: self.expected,
        })
    }
}

fn fin(v: Rational) -> ExtendedRational {
    ExtendedRational::Finite(v)
}

/// `{e1,e2}, {e3,e4}, ...` for `n` agents.
fn pairs(n: usize) -> Vec<ChoreSet> {
    (1..=n).map(|i| set(&[2 * i - 1, 2 * i])).collect()
}

/// `{e1,e2}, {e3}, {e4}, ..., {e_{n+1}}`.
fn pair_then_singles(n: usize) -> Vec<ChoreSet> {
    let mut out = vec![set(&[1, 2])];
    out.extend((2..=n).map(|j| set(&[j + 1])));
    out
}

fn build(b: &mut Builder<'_>) -> Result<()> {
    use Criterion::*;
    match b.id {
        FamilyId::EfMmsTight => {
            let n = b.n(3, 2)?;
            let a = b.alpha(r(2))?;
            b.chores(n * n)?;
            let vals = (0..n * n).map(|j| if j < n { a } else { Rational::ONE });
            b.identical(n, CostFunction::additive(vals));
            b.bundles = (1..=n).map(|i| span(n * (i - 1) + 1, n * i)).collect();
            let nn = ri(n);
            b.connection(Ef, a, &[(Mms, fin(nn * a / (nn - r(1) + a)))]);
            b.expect("mms_1", a + nn - r(1));
        }
        FamilyId::EfPmmsTight => {
            let n = b.n(3, 2)?;
            let a = b.alpha(r(2))?;
            b.chores(2 * n)?;
            let vals = (0..2 * n).map(|j| if j < 2 { a } else { Rational::ONE });
            b.identical(n, CostFunction::additive(vals));
            b.bundles = pairs(n);
            b.connection(Ef, a, &[(Pmms, fin(r(2) * a / (r(1) + a)))]);
        }
        FamilyId::Ef1NotEfx => {
            let n = b.n(3, 2)?;
            let p = b.p(4, 2)?;
            b.chores(2 * n)?;
            let vals = (0..2 * n).map(|j| if j == 0 { r(p as i128) } else { Rational::ONE });
            b.identical(n, CostFunction::additive(vals));
            b.bundles = pairs(n);
            b.connection(Ef1, Rational::ONE, &[(Efx, fin(q(p as i128, 2)))]);
        }
        FamilyId::Ef1MmsTight => {
            let n = b.n(3, 2)?;
            let a = b.alpha(r(2))?;
            let m = n * n - n + 1;
            b.chores(m)?;
            let nn = ri(n);
            let vals = (0..m).map(|j| match j {
                0 => a + nn - r(1),
                j if j < n => a,
                _ => Rational::ONE,
            });
            b.identical(n, CostFunction::additive(vals));
            let mut bundles = vec![span(1, n)];
            bundles.extend((2..=n).map(|j| span(n + (n - 1) * (j - 2) + 1, n + (n - 1) * (j - 1))));
            b.bundles = bundles;
            let ratio = (nn * a + nn - r(1)) / (nn - r(1) + a);
            b.connection(Ef1, a, &[(Mms, fin(ratio))]);
            b.expect("mms_1", a + nn - r(1));
        }
        FamilyId::EfxMmsLbA => {
            let n = b.n(3, 2)?;
            b.chores(2 * n)?;
            // c(e_j) = ceil(j/2)
            let vals = (1..=2 * n).map(|j| ri(j.div_ceil(2)));
            b.identical(n, CostFunction::additive(vals));
            let mut bundles = vec![set(&[2 * n - 1, 2 * n])];
            bundles.extend((2..=n).map(|i| set(&[i - 1, 2 * n - i])));
            b.bundles = bundles;
            let nn = ri(n);
            b.connection(Efx, Rational::ONE, &[(Mms, fin(r(2) * nn / (nn + r(1))))]);
            b.expect("mms_1", nn + r(1));
        }
        FamilyId::EfxMmsLbB => {
            let n = b.n(3, 2)?;
            let a = b.alpha(r(1))?;
            let m = 2 * n * n - 2 * n;
            b.chores(m)?;
            let mut bundles = vec![span(1, n), span(n + 1, 3 * n - 2)];
            for j in 3..=n {
                let lo = 3 * n - 1 + (j - 3) * (2 * n - 1);
                let hi = 3 * n - 2 + (j - 2) * (2 * n - 1);
                bundles.push(span(lo, hi));
            }
            let covered = bundles.iter().map(|s| s.len()).sum::<usize>();
            if covered != m {
                return Err(Error::Internal(format!(
                    "{}: bundles cover {covered} of {m} chores",
                    b.id
                )));
            }
            let agent1 = CostFunction::additive((0..m).map(|j| if j < n { r(2) * a } else { Rational::ONE }));
            b.costs = std::iter::once(agent1)
                .chain(bundles[1..].iter().map(|&own| indicator(m, own)))
                .collect();
            b.bundles = bundles;
            let nn = ri(n);
            let share = r(2) * a + r(2) * nn - r(3);
            b.connection(Efx, a, &[(Mms, fin(r(2) * nn * a / share))]);
            b.expect("mms_1", share);
        }
        FamilyId::EfxPmmsTight => {
            let n = b.n(3, 2)?;
            let a = b.alpha(r(1))?;
            b.chores(2 * n)?;
            let vals = (0..2 * n).map(|j| if j < 2 { r(2) * a } else { Rational::ONE });
            b.identical(n, CostFunction::additive(vals));
            b.bundles = pairs(n);
            b.connection(Efx, a, &[(Pmms, fin(r(4) * a / (r(2) * a + r(1))))]);
        }
        FamilyId::Ef1PmmsTight => {
            let n = b.n(3, 2)?;
            let a = b.alpha(r(1))?;
            b.chores(n + 1)?;
            let vals = (0..=n).map(|j| match j {
                0 => a + r(1),
                1 => a,
                _ => Rational::ONE,
            });
            b.identical(n, CostFunction::additive(vals));
            b.bundles = pair_then_singles(n);
            b.connection(Ef1, a, &[(Pmms, fin((r(2) * a + r(1)) / (a + r(1))))]);
        }
        FamilyId::PmmsNotEf1 => {
            let n = b.n(3, 2)?;
            let a = b.alpha(q(3, 2))?;
            let e = b.epsilon()?;
            b.require(a > r(1) && a < r(2), "1 < alpha < 2")?;
            let big = (a - r(1)).recip();
            b.require(big >= r(1) + e, "1/(alpha-1) >= 1 + epsilon")?;
            b.chores(n + 1)?;
            let vals = (0..=n).map(|j| match j {
                0 => big,
                1 => Rational::ONE,
                _ => e,
            });
            b.identical(n, CostFunction::additive(vals));
            b.bundles = pair_then_singles(n);
            b.connection(Pmms, a, &[(Ef1, fin(e.recip()))]);
        }
        FamilyId::PmmsMmsN3Tight => {
            let n = b.fixed_n(3)?;
            b.chores(6)?;
            b.identical(n, CostFunction::additive([2, 2, 2, 1, 1, 1].map(r)));
            b.bundles = vec![set(&[1, 2]), set(&[3]), set(&[4, 5, 6])];
            b.connection(Pmms, Rational::ONE, &[(Mms, fin(q(4, 3)))]);
            b.expect("mms_1", r(3));
        }
        FamilyId::PmmsMmsLb => {
            let n = b.n(5, 3)?;
            b.require(n % 2 == 1, "n odd")?;
            let m = 2 * n;
            b.chores(m)?;
            let nn = ri(n);
            let mut bundles = vec![set(&[1, 2])];
            bundles.extend((2..n).map(|j| set(&[j + 1])));
            bundles.push(span(n + 1, 2 * n));
            let big = (nn + r(1)) / r(2);
            let agent1 = CostFunction::additive((0..m).map(|j| if j < n { big } else { Rational::ONE }));
            b.costs = std::iter::once(agent1)
                .chain(bundles[1..].iter().map(|&own| indicator(m, own)))
                .collect();
            b.bundles = bundles;
            b.connection(Pmms, Rational::ONE, &[(Mms, fin((r(2) * nn + r(2)) / (nn + r(3))))]);
            b.expect("mms_1", (nn + r(3)) / r(2));
        }
        FamilyId::ApmmsMmsLb => {
            let n = b.n(4, 3)?;
            b.require(n % 2 == 0, "n even")?;
            let a = b.alpha(q(5, 4))?;
            b.require(a > r(1) && a < q(3, 2), "1 < alpha < 3/2")?;
            b.chores(n * n)?;
            let vals = (0..n * n).map(|j| if j < n { a } else { r(2) - a });
            b.identical(n, CostFunction::additive(vals));
            b.bundles = (1..=n).map(|i| span(n * (i - 1) + 1, n * i)).collect();
            let nn = ri(n);
            let share = a + (nn - r(1)) * (r(2) - a);
            b.connection(Pmms, a, &[(Mms, fin(nn * a / share))]);
            b.expect("mms_1", share);
        }
        FamilyId::MmsNotPmms | FamilyId::MmsNotEf1 => {
            let n = b.n(4, 3)?;
            let p = b.p(4, 1)? as usize;
            let m = p + 2 * n - 1;
            b.chores(m)?;
            let pp = ri(p);
            let mut bundles = vec![span(1, p + 1)];
            bundles.extend((2..=n - 2).map(|i| set(&[p + i])));
            bundles.push(set(&[n + p - 1, n + p]));
            bundles.push(span(n + p + 1, 2 * n + p - 1));
            let agent1 = CostFunction::additive((0..m).map(|j| if j < n + p { Rational::ONE } else { pp }));
            b.costs = std::iter::once(agent1)
                .chain(bundles[1..].iter().map(|&own| indicator(m, own)))
                .collect();
            b.bundles = bundles;
            // With n = 3 there are no singleton bundles and the worst
            // comparison is against the two-chore bundle.
            let (pmms, ef1) = if n >= 4 {
                ((pp + r(1)) / ri((p + 2).div_ceil(2)), pp)
            } else {
                ((pp + r(1)) / ri((p + 3).div_ceil(2)), pp / r(2))
            };
            let target = if b.id == FamilyId::MmsNotPmms {
                (Pmms, fin(pmms))
            } else {
                (Ef1, fin(ef1.max(Rational::ONE)))
            };
            b.connection(Mms, Rational::ONE, &[target]);
            b.expect("mms_1", pp + r(1));
        }
        FamilyId::SubEfCoverage => {
            let n = b.n(4, 2)?;
            b.require(n % 2 == 0, "n even")?;
            b.chores(n * n)?;
            // e_{ij} sits at (i-1)n + (j-1); rows are the coverage groups.
            let rows = (1..=n).map(|i| span((i - 1) * n + 1, i * n)).collect();
            b.identical(n, CostFunction::RowCoverage { rows, weights: vec![Rational::ONE; n] });
            b.bundles = (0..n)
                .map(|j| (0..n).fold(ChoreSet::EMPTY, |s, i| s.with(i * n + j)))
                .collect();
            b.connection(Ef, Rational::ONE, &[(Mms, fin(ri(n))), (Pmms, fin(r(2)))]);
            b.expect("mms_1", r(1));
        }
        FamilyId::SubPmmsCapped => {
            let n = b.fixed_n(2)?;
            b.chores(3)?;
            b.identical(n, CostFunction::CappedCardinality { cap: 2 });
            b.bundles = vec![ChoreSet::full(3), ChoreSet::EMPTY];
            b.connection(Pmms, Rational::ONE, &[(Ef1, ExtendedRational::Infinity)]);
            b.expect("mms_1", r(2));
        }
        FamilyId::SubPmmsMmsTight => {
            let n = b.n(4, 2)?;
            b.require(n % 2 == 0, "n even")?;
            let a = b.alpha(q(3, 2))?;
            b.require(a < r(2), "alpha < 2")?;
            let cols = n + 1;
            b.chores(n * cols)?;
            let half = a * ri(n) / r(2);
            let t = half.floor() as usize;
            let delta = half - ri(t);
            // e_{ij} sits at (i-1)(n+1) + (j-1).
            let at = |i: usize, j: usize| (i - 1) * cols + (j - 1);
            let column = |j: usize| (1..=n).fold(ChoreSet::EMPTY, |s, i| s.with(at(i, j)));
            let row_tail = |i: usize| {
                (t + 1..n).chain(std::iter::once(n + 1)).fold(ChoreSet::EMPTY, |s, j| s.with(at(i, j)))
            };
            let mut a1 = column(n);
            for j in 1..=t {
                a1 = a1.union(column(j));
            }
            let mut bundles = vec![a1];
            bundles.extend((2..n).map(row_tail));
            bundles.push(row_tail(n).union(row_tail(1)));
            let mut weights = vec![Rational::ONE; n - 1];
            weights.push(delta);
            weights.push(r(1) - delta);
            let agent1 = CostFunction::RowCoverage {
                rows: (1..=cols).map(column).collect(),
                weights,
            };
            let m = n * cols;
            b.costs = std::iter::once(agent1)
                .chain(bundles[1..].iter().map(|&own| indicator(m, own)))
                .collect();
            b.bundles = bundles;
            b.connection(Pmms, a, &[(Mms, fin(half))]);
            b.expect("mms_1", r(1));
        }
        FamilyId::PofEf1N2 => {
            b.fixed_n(2)?;
            let e = b.epsilon()?;
            b.chores(3)?;
            let third = q(1, 3);
            b.costs = vec![
                CostFunction::additive([r(0), q(1, 2), q(1, 2)]),
                CostFunction::additive([third - r(2) * e, third + e, third + e]),
            ];
            b.bundles = vec![set(&[1, 2]), set(&[3])];
            b.price(&[(Ef1, r(1))], r(1), q(2, 3) + r(2) * e, q(5, 6) + e);
        }
        FamilyId::PofPmms32N2 => {
            b.fixed_n(2)?;
            let e = b.epsilon()?;
            b.chores(4)?;
            b.costs = vec![
                CostFunction::additive([q(3, 8), q(3, 8) + e, q(1, 8) - e, q(1, 8)]),
                CostFunction::additive([q(1, 2), q(1, 2), r(0), r(0)]),
            ];
            b.bundles = vec![set(&[1]), set(&[2, 3, 4])];
            b.price(&[(Pmms, q(3, 2))], r(1), q(3, 4) + e, q(7, 8));
        }
        FamilyId::PofPmmsN2 => {
            b.fixed_n(2)?;
            let e = b.epsilon()?;
            b.chores(3)?;
            b.costs = vec![
                CostFunction::additive([q(1, 2), q(1, 2) - e, e]),
                CostFunction::additive([q(1, 2), e, q(1, 2) - e]),
            ];
            b.bundles = vec![set(&[1]), set(&[2, 3])];
            b.price(&[(Pmms, r(1)), (Mms, r(1)), (Efx, r(1))], r(1), q(1, 2) + r(2) * e, r(1));
        }
        FamilyId::PofN3Unbounded => {
            let n = b.n(3, 3)?;
            let m = b.m(6, 5)?;
            let e = b.epsilon()?;
            b.require(ri(m) * e <= q(1, 3), "m * epsilon <= 1/3")?;
            b.chores(m)?;
            let mm = ri(m);
            let inv = mm.recip();
            // The last four chores are e_{m-3}, ..., e_m.
            let tail = |j: usize| j + 4 >= m;
            let c1 = (0..m).map(|j| match j {
                0 => r(1) - r(4) * e,
                j if tail(j) => e,
                _ => r(0),
            });
            let c2 = (0..m).map(|j| match j {
                0 => r(1) - r(4) * inv,
                j if tail(j) => inv,
                _ => r(0),
            });
            let c3 = (0..m).map(|j| match j {
                0 => e,
                j if j == m - 1 => inv - e,
                _ => inv,
            });
            let mut costs = vec![CostFunction::additive(c1), CostFunction::additive(c2), CostFunction::additive(c3)];
            costs.extend((3..n).map(|_| CostFunction::additive(vec![inv; m])));
            b.costs = costs;
            let mut bundles = vec![ChoreSet::EMPTY; n];
            bundles[2] = set(&[1, m]);
            bundles[0] = ChoreSet::full(m).difference(bundles[2]);
            b.bundles = bundles;
            b.price(
                &[(Pmms, q(3, 2)), (Ef1, r(1)), (Efx, r(1)), (Pmms, r(1))],
                q(3, 2),
                r(5) * e,
                inv + r(3) * e,
            );
        }
        FamilyId::PofMmsLb => {
            let n = b.n(4, 3)?;
            let e = b.epsilon()?;
            let m = n + 1;
            b.chores(m)?;
            let inv = ri(n).recip();
            let c1 = (0..m).map(|j| match j {
                1 => e,
                2 => inv - e,
                _ => inv,
            });
            let other = CostFunction::additive((0..m).map(|j| if j < 2 { q(1, 2) } else { r(0) }));
            b.costs = std::iter::once(CostFunction::additive(c1))
                .chain((1..n).map(|_| other.clone()))
                .collect();
            let mut bundles = vec![ChoreSet::EMPTY; n];
            bundles[0] = set(&[2]);
            bundles[1] = ChoreSet::full(m).without(1);
            b.bundles = bundles;
            b.price(&[(Mms, r(1))], r(1), inv + e, q(1, 2) + e);
            b.expect("mms_1", inv);
            b.expect("mms_2", q(1, 2));
        }
        FamilyId::Pof2MmsLb => {
            let n = b.n(4, 3)?;
            let e = b.epsilon()?;
            let m = n + 3;
            b.chores(m)?;
            let inv = ri(n).recip();
            let c1 = (0..m).map(|j| match j {
                0 | 1 => inv - e,
                2 => r(3) * e,
                3 | 4 => e,
                5 => inv - r(3) * e,
                _ => inv,
            });
            let other = CostFunction::additive((0..m).map(|j| if j < 3 { q(1, 3) } else { r(0) }));
            b.costs = std::iter::once(CostFunction::additive(c1))
                .chain((1..n).map(|_| other.clone()))
                .collect();
            let mut bundles = vec![ChoreSet::EMPTY; n];
            bundles[0] = set(&[1, 3]);
            bundles[1] = ChoreSet::full(m).difference(bundles[0]);
            b.bundles = bundles;
            // MMS_1(n, E) = 1/n: {e1,e4}, {e2,e5}, {e3,e6}, then singletons.
            b.price(
                &[(Mms, r(2))],
                (inv + r(2) * e) / inv,
                r(2) * inv + e,
                q(1, 3) + inv + r(2) * e,
            );
            b.expect("mms_1", inv);
            b.expect("mms_2", q(1, 3));
        }
        FamilyId::SubPofEfx => {
            b.fixed_n(2)?;
            let e = b.epsilon()?;
            b.chores(3)?;
            b.costs = vec![
                CostFunction::additive([q(1, 2), q(1, 2) - e, e]),
                CostFunction::CappedAdditive {
                    values: vec![r(1) - e, r(3) * e, r(1) - r(2) * e],
                    cap: r(1),
                },
            ];
            b.bundles = vec![set(&[2, 3]), set(&[1])];
            b.price(&[(Efx, r(1))], r(1), q(1, 2) + r(4) * e, q(3, 2) - e);
        }
        FamilyId::SubPofEf1 => {
            b.fixed_n(2)?;
            let e = b.epsilon()?;
            b.chores(3)?;
            b.costs = vec![
                CostFunction::additive([q(1, 3) + e, q(1, 3), q(1, 3) - e]),
                CostFunction::CappedAdditive {
                    values: vec![r(1) - e, r(1) - e, e],
                    cap: r(1),
                },
            ];
            b.bundles = vec![set(&[2]), set(&[1, 3])];
            b.price(&[(Ef1, r(1))], r(1), q(2, 3) + r(2) * e, q(4, 3));
        }
        FamilyId::SubPofPmms => {
            b.fixed_n(2)?;
            let e = b.epsilon()?;
            b.chores(3)?;
            let table = CostFunction::table_from(3, |s| match s.bits() {
                0 => r(0),
                0b001 => r(1) - r(2) * e,
                0b010 => r(10) * e,
                0b100 => r(1) - r(3) * e,
                0b110 => r(1) - e,
                _ => r(1),
            })?;
            b.costs = vec![CostFunction::additive([q(1, 2), q(1, 2) - e, e]), table];
            b.bundles = vec![set(&[2, 3]), set(&[1])];
            b.price(&[(Pmms, r(1)), (Mms, r(1))], r(1), q(1, 2) + r(11) * e, q(3, 2) - r(2) * e);
        }
        FamilyId::SubPofPmms32 => {
            b.fixed_n(2)?;
            let e = b.epsilon()?;
            b.chores(4)?;
            b.costs = vec![
                CostFunction::additive([q(3, 8), q(3, 8) + e, q(1, 8) - e, q(1, 8)]),
                CostFunction::CappedAdditive {
                    values: vec![r(1) - e, r(1) - e, e, e],
                    cap: r(1),
                },
            ];
            b.bundles = vec![ChoreSet::EMPTY, ChoreSet::full(4)];
            b.price(&[(Pmms, q(3, 2))], r(1), q(3, 4) + r(3) * e, r(1));
        }
    }
    Ok(())
}

/// A small parameter grid for `id`: `n ≤ n_max`, `α ∈ {1, 5/4, 3/2, 2}`,
/// `ε = epsilon`, and a few `p` values, all filtered by validity.
pub fn default_grid(id: FamilyId, n_max: usize, epsilon: Rational) -> Vec<FamilyParams> {
    let alphas = [r(1), q(5, 4), q(3, 2), r(2)];
    let ps = [1u32, 2, 3, 10, 50];
    let base = FamilyParams::default();
    let mut out = Vec::new();
    let mut push = |p: FamilyParams| {
        if make_family(id, &p).is_ok() {
            out.push(p);
        }
    };
    match id {
        FamilyId::PmmsMmsN3Tight | FamilyId::SubPmmsCapped => push(base),
        FamilyId::EfxMmsLbA | FamilyId::PmmsMmsLb | FamilyId::SubEfCoverage => {
            for n in 2..=n_max {
                push(base.clone().with_n(n));
            }
        }
        FamilyId::Ef1NotEfx | FamilyId::MmsNotPmms | FamilyId::MmsNotEf1 => {
            for n in 2..=n_max {
                for &p in &ps {
                    push(base.clone().with_n(n).with_p(p));
                }
            }
        }
        FamilyId::PmmsNotEf1 => {
            for n in 2..=n_max {
                for &a in &alphas {
                    push(base.clone().with_n(n).with_alpha(a).with_epsilon(epsilon));
                }
            }
        }
        FamilyId::PofEf1N2
        | FamilyId::PofPmms32N2
        | FamilyId::PofPmmsN2
        | FamilyId::SubPofEfx
        | FamilyId::SubPofEf1
        | FamilyId::SubPofPmms
        | FamilyId::SubPofPmms32 => push(base.with_epsilon(epsilon)),
        FamilyId::PofN3Unbounded => {
            for n in 3..=n_max.min(4) {
                push(base.clone().with_n(n).with_m(6).with_epsilon(epsilon));
            }
        }
        FamilyId::PofMmsLb | FamilyId::Pof2MmsLb => {
            for n in 3..=n_max {
                push(base.clone().with_n(n).with_epsilon(epsilon));
            }
        }
        _ => {
            for n in 2..=n_max {
                for &a in &alphas {
                    push(base.clone().with_n(n).with_alpha(a));
                }
            }
        }
    }
    out
}
