use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest ground set a [`ChoreSet`] can address.
pub const MAX_CHORES: usize = 64;

/// A set of chore indices stored as a 64-bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ChoreSet(u64);

impl ChoreSet {
    pub const EMPTY: ChoreSet = ChoreSet(0);

    pub fn from_bits(bits: u64) -> ChoreSet {
        ChoreSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// `{0, 1, …, m-1}`.
    pub fn full(m: usize) -> ChoreSet {
        assert!(m <= MAX_CHORES, "at most {MAX_CHORES} chores are supported");
        if m == MAX_CHORES {
            ChoreSet(u64::MAX)
        } else {
            ChoreSet((1u64 << m) - 1)
        }
    }

    pub fn singleton(e: usize) -> ChoreSet {
        assert!(e < MAX_CHORES, "chore index {e} out of range");
        ChoreSet(1u64 << e)
    }

    /// `{lo, …, hi-1}`.
    pub fn range(lo: usize, hi: usize) -> ChoreSet {
        if lo >= hi {
            return ChoreSet::EMPTY;
        }
        ChoreSet(ChoreSet::full(hi).0 & !ChoreSet::full(lo).0)
    }

    pub fn try_from_indices<I: IntoIterator<Item = usize>>(items: I, m: usize) -> Result<ChoreSet> {
        let mut s = ChoreSet::EMPTY;
        for e in items {
            if e >= m || e >= MAX_CHORES {
                return Err(Error::Bounds(format!("chore index {e} out of range for m={m}")));
            }
            if s.contains(e) {
                return Err(Error::Argument(format!("chore index {e} listed twice")));
            }
            s.insert(e);
        }
        Ok(s)
    }

    pub fn contains(self, e: usize) -> bool {
        e < MAX_CHORES && self.0 >> e & 1 == 1
    }

    pub fn insert(&mut self, e: usize) {
        *self = self.with(e);
    }

    pub fn remove(&mut self, e: usize) {
        *self = self.without(e);
    }

    pub fn with(self, e: usize) -> ChoreSet {
        ChoreSet(self.0 | ChoreSet::singleton(e).0)
    }

    pub fn without(self, e: usize) -> ChoreSet {
        ChoreSet(self.0 & !ChoreSet::singleton(e).0)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: ChoreSet) -> ChoreSet {
        ChoreSet(self.0 | other.0)
    }

    pub fn intersection(self, other: ChoreSet) -> ChoreSet {
        ChoreSet(self.0 & other.0)
    }

    pub fn difference(self, other: ChoreSet) -> ChoreSet {
        ChoreSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: ChoreSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: ChoreSet) -> bool {
        self.0 & other.0 == 0
    }

    /// One past the largest member, or 0 when empty.
    pub fn upper_bound(self) -> usize {
        MAX_CHORES - self.0.leading_zeros() as usize
    }

    /// Members in ascending order.
    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Every subset of `self`, starting from the empty set.
    pub fn subsets(self) -> Subsets {
        Subsets {
            universe: self.0,
            next: Some(0),
        }
    }
}

pub struct Iter(u64);

impl Iterator for Iter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let e = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(e)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

pub struct Subsets {
    universe: u64,
    next: Option<u64>,
}

impl Iterator for Subsets {
    type Item = ChoreSet;

    fn next(&mut self) -> Option<ChoreSet> {
        let cur = self.next?;
        self.next = if cur == self.universe {
            None
        } else {
            Some((cur.wrapping_sub(self.universe)) & self.universe)
        };
        Some(ChoreSet(cur))
    }
}

impl IntoIterator for ChoreSet {
    type Item = usize;
    type IntoIter = Iter;

    fn into_iter(self) -> Iter {
        self.iter()
    }
}

impl FromIterator<usize> for ChoreSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> ChoreSet {
        let mut s = ChoreSet::EMPTY;
        for e in iter {
            s.insert(e);
        }
        s
    }
}

impl fmt::Debug for ChoreSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for ChoreSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, e) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for ChoreSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for ChoreSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let items = Vec::<usize>::deserialize(d)?;
        ChoreSet::try_from_indices(items, MAX_CHORES).map_err(serde::de::Error::custom)
    }
}
