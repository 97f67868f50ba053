use serde::{Deserialize, Serialize};

use crate::chore_set::ChoreSet;
use crate::error::{size_guard, Error, Result};
use crate::instance::Instance;
use crate::rational::Rational;

/// Upper limit on `n^m` for exhaustive enumeration.
pub const ENUMERATION_LIMIT: u64 = 2_000_000;

/// An ordered partition of `{0, …, m-1}` into `n` bundles (empty allowed).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Allocation {
    #[serde(skip)]
    m: usize,
    bundles: Vec<ChoreSet>,
}

impl Allocation {
    pub fn new(m: usize, bundles: Vec<ChoreSet>) -> Result<Allocation> {
        if bundles.is_empty() {
            return Err(Error::Partition("an allocation needs at least one bundle".into()));
        }
        let full = ChoreSet::full(m);
        let mut seen = ChoreSet::EMPTY;
        for (i, b) in bundles.iter().enumerate() {
            if !b.is_subset(full) {
                return Err(Error::Partition(format!(
                    "bundle {i} contains chores outside 0..{m}"
                )));
            }
            if !b.is_disjoint(seen) {
                let dup = b.intersection(seen).iter().next().unwrap_or(0);
                return Err(Error::Partition(format!("chore {dup} is assigned twice")));
            }
            seen = seen.union(*b);
        }
        if let Some(missing) = full.difference(seen).iter().next() {
            return Err(Error::Partition(format!("chore {missing} is not assigned")));
        }
        Ok(Allocation { m, bundles })
    }

    /// `assignment[e]` is the agent receiving chore `e`.
    pub fn from_assignment(assignment: &[usize], n: usize) -> Result<Allocation> {
        let mut bundles = vec![ChoreSet::EMPTY; n];
        for (e, &agent) in assignment.iter().enumerate() {
            if agent >= n {
                return Err(Error::Partition(format!(
                    "chore {e} assigned to agent {agent}, but n={n}"
                )));
            }
            bundles[agent].insert(e);
        }
        Allocation::new(assignment.len(), bundles)
    }

    pub fn n(&self) -> usize {
        self.bundles.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn bundles(&self) -> &[ChoreSet] {
        &self.bundles
    }

    pub fn bundle(&self, agent: usize) -> ChoreSet {
        self.bundles[agent]
    }

    pub fn assignment(&self) -> Vec<usize> {
        let mut out = vec![0; self.m];
        for (i, b) in self.bundles.iter().enumerate() {
            for e in *b {
                out[e] = i;
            }
        }
        out
    }

    /// Checks that the allocation matches the instance's dimensions.
    pub fn check_against(&self, inst: &Instance) -> Result<()> {
        if self.n() != inst.n() || self.m != inst.m() {
            return Err(Error::Argument(format!(
                "allocation has {} bundles over {} chores, instance has n={} and m={}",
                self.n(),
                self.m,
                inst.n(),
                inst.m()
            )));
        }
        Ok(())
    }

    /// `SC(A) = Σ_i c_i(A_i)`.
    pub fn social_cost(&self, inst: &Instance) -> Result<Rational> {
        self.check_against(inst)?;
        Ok(self
            .bundles
            .iter()
            .enumerate()
            .map(|(i, b)| inst.eval(i, *b))
            .sum())
    }

    /// Returns a copy with bundles reordered so that new agent `i` gets old
    /// bundle `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Allocation {
        Allocation {
            m: self.m,
            bundles: perm.iter().map(|&p| self.bundles[p]).collect(),
        }
    }
}

/// Serialized form `{"bundles": [[0, 3], [1, 2]]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AllocationJson {
    pub bundles: Vec<Vec<usize>>,
}

impl AllocationJson {
    pub fn into_allocation(self, m: usize) -> Result<Allocation> {
        let bundles = self
            .bundles
            .into_iter()
            .map(|b| ChoreSet::try_from_indices(b, m).map_err(|e| Error::Partition(e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Allocation::new(m, bundles)
    }
}

/// `n^m`, or `None` on overflow.
pub fn allocation_count(n: usize, m: usize) -> Option<u64> {
    (n as u64).checked_pow(m as u32)
}

/// All `n^m` assignments in lexicographic order of the assignment vector,
/// chore 0 being the most significant digit.
pub fn enumerate_allocations(m: usize, n: usize) -> Result<Assignments> {
    if n == 0 {
        return Err(Error::Argument("n must be at least 1".into()));
    }
    let count = allocation_count(n, m).unwrap_or(u64::MAX);
    size_guard(format!("{n}^{m} allocations"), count, ENUMERATION_LIMIT)?;
    Ok(Assignments {
        n,
        digits: vec![0; m],
        bundles: {
            let mut b = vec![ChoreSet::EMPTY; n];
            b[0] = ChoreSet::full(m);
            b
        },
        done: false,
    })
}

/// Iterator returned by [`enumerate_allocations`].
pub struct Assignments {
    n: usize,
    digits: Vec<usize>,
    bundles: Vec<ChoreSet>,
    done: bool,
}

impl Assignments {
    /// The assignment vector of the allocation yielded last.
    pub fn digits(&self) -> &[usize] {
        &self.digits
    }

    fn advance(&mut self) {
        for pos in (0..self.digits.len()).rev() {
            let d = self.digits[pos];
            self.bundles[d].remove(pos);
            if d + 1 < self.n {
                self.digits[pos] = d + 1;
                self.bundles[d + 1].insert(pos);
                return;
            }
            self.digits[pos] = 0;
            self.bundles[0].insert(pos);
        }
        self.done = true;
    }
}

impl Iterator for Assignments {
    type Item = Allocation;

    fn next(&mut self) -> Option<Allocation> {
        if self.done {
            return None;
        }
        let out = Allocation {
            m: self.digits.len(),
            bundles: self.bundles.clone(),
        };
        self.advance();
        Some(out)
    }
}
