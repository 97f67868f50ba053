use serde::{Deserialize, Serialize};

use crate::chore_set::{ChoreSet, MAX_CHORES};
use crate::cost::CostFunction;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// `n` agents sharing a ground set of `m` chores, one cost function each.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "InstanceJson", into = "InstanceJson")]
pub struct Instance {
    m: usize,
    costs: Vec<CostFunction>,
    normalized: bool,
}

impl Instance {
    pub fn new(m: usize, costs: Vec<CostFunction>) -> Result<Instance> {
        if costs.is_empty() {
            return Err(Error::Argument("an instance needs at least one agent".into()));
        }
        if m > MAX_CHORES {
            return Err(Error::Size {
                what: format!("chore count ({m})"),
                limit: MAX_CHORES as u64,
            });
        }
        for (i, c) in costs.iter().enumerate() {
            c.validate(m)
                .map_err(|e| Error::Argument(format!("agent {i}: {e}")))?;
        }
        Ok(Instance {
            m,
            costs,
            normalized: false,
        })
    }

    /// Like [`Instance::new`], additionally asserting `c_i(E) = 1` for all agents.
    pub fn new_normalized(m: usize, costs: Vec<CostFunction>) -> Result<Instance> {
        Instance::new(m, costs)?.mark_normalized()
    }

    /// Sets the normalized flag after checking every total is exactly 1.
    pub fn mark_normalized(mut self) -> Result<Instance> {
        for i in 0..self.n() {
            let total = self.total(i);
            if total != Rational::ONE {
                return Err(Error::Argument(format!(
                    "agent {i} has total cost {total}, not 1"
                )));
            }
        }
        self.normalized = true;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.costs.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn costs(&self) -> &[CostFunction] {
        &self.costs
    }

    pub fn cost_fn(&self, agent: usize) -> &CostFunction {
        &self.costs[agent]
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// The full chore set `E`.
    pub fn chores(&self) -> ChoreSet {
        ChoreSet::full(self.m)
    }

    pub fn check_agent(&self, agent: usize) -> Result<()> {
        if agent >= self.n() {
            return Err(Error::Bounds(format!(
                "agent index {agent} out of range for n={}",
                self.n()
            )));
        }
        Ok(())
    }

    pub fn check_set(&self, s: ChoreSet) -> Result<()> {
        if !s.is_subset(self.chores()) {
            return Err(Error::Bounds(format!(
                "chore set {s} out of range for m={}",
                self.m
            )));
        }
        Ok(())
    }

    /// `c_agent(s)` with bounds checks.
    pub fn cost(&self, agent: usize, s: ChoreSet) -> Result<Rational> {
        self.check_agent(agent)?;
        self.check_set(s)?;
        Ok(self.costs[agent].eval(s))
    }

    /// `c_agent(s)` without bounds checks.
    pub fn eval(&self, agent: usize, s: ChoreSet) -> Rational {
        self.costs[agent].eval(s)
    }

    pub fn single(&self, agent: usize, e: usize) -> Rational {
        self.costs[agent].single(e)
    }

    /// `c_agent(E)`.
    pub fn total(&self, agent: usize) -> Rational {
        self.eval(agent, self.chores())
    }

    pub fn all_additive(&self) -> bool {
        self.costs.iter().all(CostFunction::is_additive)
    }

    pub fn all_subadditive(&self) -> bool {
        self.costs.iter().all(CostFunction::is_subadditive_variant)
    }

    /// Additive value vectors, if every agent is additive.
    pub fn additive_values(&self) -> Option<Vec<&[Rational]>> {
        self.costs.iter().map(|c| c.additive_values()).collect()
    }
}

/// Rescales every agent by `1 / c_i(E)` and sets the normalized flag.
///
/// Minimal approximation factors are invariant under this map.
pub fn normalize(inst: &Instance) -> Result<Instance> {
    let mut costs = Vec::with_capacity(inst.n());
    for i in 0..inst.n() {
        let total = inst.total(i);
        if total.is_zero() {
            return Err(Error::Normalization { agent: i });
        }
        costs.push(inst.cost_fn(i).scaled(total.recip(), inst.m())?);
    }
    let mut out = Instance::new(inst.m(), costs)?;
    out.normalized = true;
    Ok(out)
}

#[derive(Serialize, Deserialize)]
struct AgentJson {
    cost: CostFunction,
}

#[derive(Serialize, Deserialize)]
struct InstanceJson {
    n: usize,
    m: usize,
    agents: Vec<AgentJson>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    normalized: bool,
}

impl TryFrom<InstanceJson> for Instance {
    type Error = Error;

    fn try_from(j: InstanceJson) -> Result<Instance> {
        if j.agents.len() != j.n {
            return Err(Error::Argument(format!(
                "n is {} but {} agents are listed",
                j.n,
                j.agents.len()
            )));
        }
        let inst = Instance::new(j.m, j.agents.into_iter().map(|a| a.cost).collect())?;
        if j.normalized {
            inst.mark_normalized()
        } else {
            Ok(inst)
        }
    }
}

impl From<Instance> for InstanceJson {
    fn from(inst: Instance) -> InstanceJson {
        InstanceJson {
            n: inst.n(),
            m: inst.m,
            normalized: inst.normalized,
            agents: inst.costs.into_iter().map(|cost| AgentJson { cost }).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn normalize_additive() {
        let inst = Instance::new(3, vec![CostFunction::additive([q(1, 1), q(1, 1), q(2, 1)])]).unwrap();
        let norm = normalize(&inst).unwrap();
        assert!(norm.is_normalized());
        assert_eq!(
            norm.cost_fn(0).additive_values().unwrap(),
            &[q(1, 4), q(1, 4), q(1, 2)]
        );
        assert_eq!(normalize(&norm).unwrap(), norm);
    }

    #[test]
    fn normalize_capped_additive_scales_by_capped_total() {
        let c = CostFunction::CappedAdditive {
            values: vec![q(1, 1), q(1, 1)],
            cap: q(1, 1),
        };
        let norm = normalize(&Instance::new(2, vec![c.clone()]).unwrap()).unwrap();
        assert_eq!(norm.cost_fn(0), &c);
    }

    #[test]
    fn normalize_capped_cardinality() {
        let inst = Instance::new(3, vec![CostFunction::CappedCardinality { cap: 2 }]).unwrap();
        let norm = normalize(&inst).unwrap();
        assert_eq!(norm.total(0), Rational::ONE);
        assert_eq!(norm.eval(0, ChoreSet::singleton(1)), q(1, 2));
    }

    #[test]
    fn zero_agent_is_rejected() {
        let inst = Instance::new(
            2,
            vec![
                CostFunction::additive([q(1, 1), q(0, 1)]),
                CostFunction::additive([q(0, 1), q(0, 1)]),
            ],
        )
        .unwrap();
        assert_eq!(normalize(&inst), Err(Error::Normalization { agent: 1 }));
    }

    #[test]
    fn json_roundtrip_and_validation() {
        let text = r#"{"n":2,"m":2,"agents":[
            {"cost":{"type":"additive","values":["1/2","1/2"]}},
            {"cost":{"type":"capped_cardinality","cap":1}}]}"#;
        let inst: Instance = serde_json::from_str(text).unwrap();
        assert_eq!(inst.n(), 2);
        let back: Instance = serde_json::from_str(&serde_json::to_string(&inst).unwrap()).unwrap();
        assert_eq!(back, inst);
        let wrong_n = r#"{"n":3,"m":1,"agents":[{"cost":{"type":"capped_cardinality","cap":1}}]}"#;
        assert!(serde_json::from_str::<Instance>(wrong_n).is_err());
        let lying = r#"{"n":1,"m":1,"normalized":true,"agents":[{"cost":{"type":"additive","values":["2"]}}]}"#;
        assert!(serde_json::from_str::<Instance>(lying).is_err());
    }
}
