// Write cost functions by hand, check their class and normalize them.
//
// A table function lists one value per subset. This one charges 1 for any
// nonempty set of chores 0 and 1 and adds the cost of chore 2 separately.

use chorefair::cost::{check_monotone, check_submodular};
use chorefair::instance::normalize;
use chorefair::{q, ChoreSet, CostFunction, Instance, Rational};

pub fn run_example() -> chorefair::Result<()> {
    let m = 3;
    let pair = ChoreSet::range(0, 2);
    let table = CostFunction::table_from(m, |s| {
        let shared = if s.intersection(pair).is_empty() { Rational::ZERO } else { Rational::ONE };
        let own = if s.contains(2) { q(1, 2) } else { Rational::ZERO };
        shared + own
    })?;
    let cardinality = CostFunction::CappedCardinality { cap: 2 };
    for f in [&table, &cardinality] {
        println!(
            "{}: monotone {}, submodular {}",
            f.variant_name(),
            check_monotone(f, m)?,
            check_submodular(f, m)?
        );
    }

    // Tables are meant for adversarial tests and are never rescaled, so
    // only the other agents can be normalized.
    let refused = normalize(&Instance::new(m, vec![table.clone(), cardinality.clone()])?).unwrap_err();
    println!("normalizing a table: {refused}");

    let coverage = CostFunction::RowCoverage {
        rows: vec![pair, ChoreSet::singleton(2)],
        weights: vec![q(2, 1), q(1, 1)],
    };
    let inst = Instance::new(m, vec![coverage, cardinality])?;
    let normalized = normalize(&inst)?;
    for i in 0..inst.n() {
        println!(
            "agent {i}: c(E) = {} before, {} after normalizing",
            inst.total(i),
            normalized.total(i)
        );
    }
    println!("{}", serde_json::to_string_pretty(&normalized).expect("instances serialize"));

    // Costs must be monotone; a decreasing table is refused.
    let bad = CostFunction::table_from(1, |s| if s.is_empty() { Rational::ONE } else { Rational::ZERO })?;
    let err = Instance::new(1, vec![bad]).unwrap_err();
    println!("rejected: {} ({})", err, err.tag());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example runs");
}
