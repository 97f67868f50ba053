//! Cost-function oracles.

use serde::{Deserialize, Serialize};

use crate::chore_set::{ChoreSet, MAX_CHORES};
use crate::error::{size_guard, Error, Result};
use crate::rational::Rational;

/// Largest ground set accepted by the [`CostFunction::Table`] variant.
pub const TABLE_MAX_CHORES: usize = 16;
/// Ground-set limit for [`check_monotone`].
pub const MONOTONE_CHECK_MAX: usize = 20;
/// Ground-set limit for [`check_submodular`].
pub const SUBMODULAR_CHECK_MAX: usize = 16;

/// A set function `c : 2^E → Q≥0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CostFunction {
    /// `c(S) = Σ values[e]`.
    Additive { values: Vec<Rational> },
    /// `c(S) = min(Σ values[e], cap)`.
    CappedAdditive { values: Vec<Rational>, cap: Rational },
    /// `c(S) = min(|S|, cap)`.
    CappedCardinality { cap: u32 },
    /// `c(S) = Σ_g weights[g] · [rows[g] ∩ S ≠ ∅]`.
    RowCoverage {
        rows: Vec<ChoreSet>,
        weights: Vec<Rational>,
    },
    /// Explicit value for every subset, indexed by the subset's bit mask.
    Table { values: Vec<Rational> },
}

impl CostFunction {
    pub fn additive<I: IntoIterator<Item = Rational>>(values: I) -> CostFunction {
        CostFunction::Additive {
            values: values.into_iter().collect(),
        }
    }

    /// Builds a table function over `m` chores from a closure.
    pub fn table_from(m: usize, f: impl Fn(ChoreSet) -> Rational) -> Result<CostFunction> {
        size_guard("table ground set", m as u64, TABLE_MAX_CHORES as u64)?;
        let values = (0..1u64 << m).map(|b| f(ChoreSet::from_bits(b))).collect();
        Ok(CostFunction::Table { values })
    }

    /// Ground set size implied by the variant's data, if any.
    pub fn ground_size(&self) -> Option<usize> {
        match self {
            CostFunction::Additive { values } | CostFunction::CappedAdditive { values, .. } => {
                Some(values.len())
            }
            CostFunction::CappedCardinality { .. } => None,
            CostFunction::RowCoverage { rows, .. } => Some(rows.iter().map(|r| r.len()).sum()),
            CostFunction::Table { values } => Some(values.len().trailing_zeros() as usize),
        }
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            CostFunction::Additive { .. } => "additive",
            CostFunction::CappedAdditive { .. } => "capped_additive",
            CostFunction::CappedCardinality { .. } => "capped_cardinality",
            CostFunction::RowCoverage { .. } => "row_coverage",
            CostFunction::Table { .. } => "table",
        }
    }

    pub fn is_additive(&self) -> bool {
        matches!(self, CostFunction::Additive { .. })
    }

    pub fn additive_values(&self) -> Option<&[Rational]> {
        match self {
            CostFunction::Additive { values } => Some(values),
            _ => None,
        }
    }

    /// All built-in variants except `Table` are submodular, hence subadditive.
    pub fn is_subadditive_variant(&self) -> bool {
        !matches!(self, CostFunction::Table { .. })
    }

    /// Checks the variant's field invariants against a ground set of size `m`.
    pub fn validate(&self, m: usize) -> Result<()> {
        if m > MAX_CHORES {
            return Err(Error::Size {
                what: format!("chore count ({m})"),
                limit: MAX_CHORES as u64,
            });
        }
        let nonneg = |vals: &[Rational], what: &str| -> Result<()> {
            match vals.iter().position(|v| v.is_negative()) {
                Some(k) => Err(Error::Argument(format!("{what}[{k}] is negative"))),
                None => Ok(()),
            }
        };
        let len = |got: usize| -> Result<()> {
            if got != m {
                Err(Error::Argument(format!(
                    "{} cost lists {got} values but the instance has {m} chores",
                    self.variant_name()
                )))
            } else {
                Ok(())
            }
        };
        match self {
            CostFunction::Additive { values } => {
                len(values.len())?;
                nonneg(values, "values")
            }
            CostFunction::CappedAdditive { values, cap } => {
                len(values.len())?;
                nonneg(values, "values")?;
                if !cap.is_positive() {
                    return Err(Error::Argument("cap must be positive".into()));
                }
                Ok(())
            }
            CostFunction::CappedCardinality { cap } => {
                if *cap == 0 {
                    return Err(Error::Argument("cap must be positive".into()));
                }
                Ok(())
            }
            CostFunction::RowCoverage { rows, weights } => {
                if rows.len() != weights.len() {
                    return Err(Error::Argument(format!(
                        "{} rows but {} weights",
                        rows.len(),
                        weights.len()
                    )));
                }
                nonneg(weights, "weights")?;
                let mut seen = ChoreSet::EMPTY;
                for (g, row) in rows.iter().enumerate() {
                    if row.is_empty() {
                        return Err(Error::Argument(format!("row {g} is empty")));
                    }
                    if !row.is_disjoint(seen) {
                        return Err(Error::Argument(format!("row {g} overlaps an earlier row")));
                    }
                    seen = seen.union(*row);
                }
                if seen != ChoreSet::full(m) {
                    return Err(Error::Argument(format!("rows do not partition the {m} chores")));
                }
                Ok(())
            }
            CostFunction::Table { values } => {
                size_guard("table ground set", m as u64, TABLE_MAX_CHORES as u64)?;
                if values.len() != 1 << m {
                    return Err(Error::Argument(format!(
                        "table has {} entries, expected 2^{m}",
                        values.len()
                    )));
                }
                nonneg(values, "table")?;
                if !values[0].is_zero() {
                    return Err(Error::Argument("table value of the empty set must be 0".into()));
                }
                Ok(())
            }
        }
    }

    /// Evaluates `c(s)`, rejecting chores outside the ground set.
    pub fn cost(&self, s: ChoreSet) -> Result<Rational> {
        if let Some(m) = self.ground_size() {
            if !s.is_subset(ChoreSet::full(m)) {
                return Err(Error::Bounds(format!("chore set {s} out of range for m={m}")));
            }
        }
        Ok(self.eval(s))
    }

    /// Evaluates `c(s)` without bounds checks.
    pub fn eval(&self, s: ChoreSet) -> Rational {
        match self {
            CostFunction::Additive { values } => s.iter().map(|e| values[e]).sum(),
            CostFunction::CappedAdditive { values, cap } => {
                let total: Rational = s.iter().map(|e| values[e]).sum();
                total.min(*cap)
            }
            CostFunction::CappedCardinality { cap } => Rational::from(s.len().min(*cap as usize)),
            CostFunction::RowCoverage { rows, weights } => rows
                .iter()
                .zip(weights)
                .filter(|(row, _)| !row.is_disjoint(s))
                .map(|(_, w)| *w)
                .sum(),
            CostFunction::Table { values } => values[s.bits() as usize],
        }
    }

    /// `c({e})`.
    pub fn single(&self, e: usize) -> Rational {
        match self {
            CostFunction::Additive { values } => values[e],
            _ => self.eval(ChoreSet::singleton(e)),
        }
    }

    /// Multiplies the function by `lambda > 0`.
    ///
    /// `CappedCardinality` becomes `CappedAdditive` with uniform values, since
    /// its cap is integral. `Table` only accepts `lambda = 1`.
    pub fn scaled(&self, lambda: Rational, m: usize) -> Result<CostFunction> {
        if !lambda.is_positive() {
            return Err(Error::Argument(format!("scale factor {lambda} must be positive")));
        }
        let mul = |v: &[Rational]| v.iter().map(|x| *x * lambda).collect::<Vec<_>>();
        Ok(match self {
            CostFunction::Additive { values } => CostFunction::Additive { values: mul(values) },
            CostFunction::CappedAdditive { values, cap } => CostFunction::CappedAdditive {
                values: mul(values),
                cap: *cap * lambda,
            },
            CostFunction::CappedCardinality { cap } => {
                if lambda == Rational::ONE {
                    self.clone()
                } else {
                    CostFunction::CappedAdditive {
                        values: vec![lambda; m],
                        cap: Rational::from(*cap) * lambda,
                    }
                }
            }
            CostFunction::RowCoverage { rows, weights } => CostFunction::RowCoverage {
                rows: rows.clone(),
                weights: mul(weights),
            },
            CostFunction::Table { .. } => {
                if lambda != Rational::ONE {
                    return Err(Error::UnsupportedVariant(
                        "table cost functions cannot be rescaled".into(),
                    ));
                }
                self.clone()
            }
        })
    }

    /// Groups the members of `s` into classes of mutually interchangeable
    /// chores: swapping two chores of one class never changes `c`.
    pub(crate) fn interchange_classes(&self, s: ChoreSet) -> Vec<Vec<usize>> {
        match self {
            CostFunction::Additive { values } | CostFunction::CappedAdditive { values, .. } => {
                let mut classes: Vec<(Rational, Vec<usize>)> = Vec::new();
                for e in s {
                    match classes.iter_mut().find(|(v, _)| *v == values[e]) {
                        Some((_, members)) => members.push(e),
                        None => classes.push((values[e], vec![e])),
                    }
                }
                classes.into_iter().map(|(_, m)| m).collect()
            }
            CostFunction::CappedCardinality { .. } => {
                if s.is_empty() {
                    vec![]
                } else {
                    vec![s.to_vec()]
                }
            }
            CostFunction::RowCoverage { rows, .. } => rows
                .iter()
                .map(|r| r.intersection(s))
                .filter(|r| !r.is_empty())
                .map(|r| r.to_vec())
                .collect(),
            CostFunction::Table { .. } => s.iter().map(|e| vec![e]).collect(),
        }
    }
}

fn check_ground(fn_: &CostFunction, m: usize, limit: usize) -> Result<()> {
    size_guard("ground set", m as u64, limit as u64)?;
    if let Some(g) = fn_.ground_size() {
        if g != m {
            return Err(Error::Argument(format!(
                "cost function is defined on {g} chores, not {m}"
            )));
        }
    }
    Ok(())
}

/// Brute-force check of `c(S) ≤ c(S ∪ {e})` over every subset.
pub fn check_monotone(fn_: &CostFunction, m: usize) -> Result<bool> {
    check_ground(fn_, m, MONOTONE_CHECK_MAX)?;
    let full = ChoreSet::full(m);
    for s in full.subsets() {
        let base = fn_.eval(s);
        for e in full.difference(s) {
            if fn_.eval(s.with(e)) < base {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Brute-force check of decreasing marginals.
///
/// Uses the local form `c(S+e) + c(S+f) ≥ c(S+e+f) + c(S)` for all `S` and
/// distinct `e, f ∉ S`, which is equivalent to the condition over all
/// `S ⊆ T, e ∉ T`.
pub fn check_submodular(fn_: &CostFunction, m: usize) -> Result<bool> {
    check_ground(fn_, m, SUBMODULAR_CHECK_MAX)?;
    let full = ChoreSet::full(m);
    for s in full.subsets() {
        let base = fn_.eval(s);
        let outside = full.difference(s).to_vec();
        let with: Vec<Rational> = outside.iter().map(|&e| fn_.eval(s.with(e))).collect();
        for a in 0..outside.len() {
            for b in a + 1..outside.len() {
                let both = fn_.eval(s.with(outside[a]).with(outside[b]));
                if with[a] + with[b] < both + base {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn ints(v: &[i128]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from_integer(x)).collect()
    }

    #[test]
    fn additive_cost_of_example_bundle() {
        let c = CostFunction::additive(ints(&[2, 3, 3, 0, 4, 2, 1]));
        let s: ChoreSet = [0, 3, 6].into_iter().collect();
        assert_eq!(c.cost(s).unwrap(), q(3, 1));
        assert_eq!(c.cost(ChoreSet::EMPTY).unwrap(), Rational::ZERO);
        assert!(c.cost(ChoreSet::singleton(7)).is_err());
    }

    #[test]
    fn row_coverage_counts_rows_touched() {
        let rows: Vec<ChoreSet> = (0..4).map(|r| ChoreSet::range(4 * r, 4 * r + 4)).collect();
        let c = CostFunction::RowCoverage {
            rows,
            weights: vec![Rational::ONE; 4],
        };
        c.validate(16).unwrap();
        let one_per_row: ChoreSet = [0, 5, 10, 15].into_iter().collect();
        assert_eq!(c.cost(one_per_row).unwrap(), q(4, 1));
        assert_eq!(c.cost(ChoreSet::range(0, 4)).unwrap(), q(1, 1));
    }

    #[test]
    fn capped_variants() {
        let card = CostFunction::CappedCardinality { cap: 2 };
        assert_eq!(card.eval(ChoreSet::full(3)), q(2, 1));
        let capped = CostFunction::CappedAdditive {
            values: ints(&[1, 1]),
            cap: q(1, 1),
        };
        assert_eq!(capped.eval(ChoreSet::full(2)), q(1, 1));
        assert_eq!(capped.eval(ChoreSet::singleton(1)), q(1, 1));
    }

    #[test]
    fn monotone_checks() {
        assert!(check_monotone(&CostFunction::additive(ints(&[1, 0, 5])), 3).unwrap());
        assert!(check_monotone(&CostFunction::CappedCardinality { cap: 2 }, 3).unwrap());
        // c({0}) = 1 but c({0,1}) = 0.
        let bad = CostFunction::Table {
            values: ints(&[0, 1, 0, 0]),
        };
        assert!(!check_monotone(&bad, 2).unwrap());
        assert!(check_monotone(&CostFunction::CappedCardinality { cap: 1 }, 21).is_err());
    }

    #[test]
    fn submodular_checks() {
        assert!(check_submodular(&CostFunction::additive(ints(&[1, 2, 3, 4])), 4).unwrap());
        let rows = vec![ChoreSet::range(0, 2), ChoreSet::range(2, 5)];
        let cov = CostFunction::RowCoverage {
            rows,
            weights: ints(&[1, 3]),
        };
        assert!(check_submodular(&cov, 5).unwrap());
        // c({0}) = c({1}) = 0 and c({0,1}) = 1.
        let bad = CostFunction::Table {
            values: ints(&[0, 0, 0, 1]),
        };
        assert!(!check_submodular(&bad, 2).unwrap());
    }

    #[test]
    fn validation_rejects_bad_fields() {
        assert!(CostFunction::additive(ints(&[1, -1])).validate(2).is_err());
        assert!(CostFunction::additive(ints(&[1])).validate(2).is_err());
        assert!(CostFunction::CappedCardinality { cap: 0 }.validate(2).is_err());
        let overlapping = CostFunction::RowCoverage {
            rows: vec![ChoreSet::range(0, 2), ChoreSet::range(1, 3)],
            weights: ints(&[1, 1]),
        };
        assert!(overlapping.validate(3).is_err());
        let gap = CostFunction::RowCoverage {
            rows: vec![ChoreSet::range(0, 2)],
            weights: ints(&[1]),
        };
        assert!(gap.validate(3).is_err());
    }

    #[test]
    fn json_shape() {
        let c: CostFunction =
            serde_json::from_str(r#"{"type":"row_coverage","rows":[[0,1],[2,3]],"weights":["1","1/2"]}"#)
                .unwrap();
        assert_eq!(c.eval(ChoreSet::singleton(3)), q(1, 2));
        let s = serde_json::to_string(&CostFunction::CappedCardinality { cap: 2 }).unwrap();
        assert_eq!(s, r#"{"type":"capped_cardinality","cap":2}"#);
    }

    #[test]
    fn interchange_classes_by_variant() {
        let add = CostFunction::additive(ints(&[1, 2, 1, 2, 3]));
        assert_eq!(
            add.interchange_classes(ChoreSet::full(5)),
            vec![vec![0, 2], vec![1, 3], vec![4]]
        );
        let card = CostFunction::CappedCardinality { cap: 2 };
        assert_eq!(card.interchange_classes(ChoreSet::range(1, 4)), vec![vec![1, 2, 3]]);
    }
}
