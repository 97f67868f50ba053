// Measure how far an allocation is from each fairness criterion.
//
// Three agents split seven chores. Allocation A is envy-free; allocation B
// is only EF1, and the report shows which agent pair breaks the others.
//
// ```bash
// cargo run --example evaluate_allocation
// ```

use chorefair::criteria::fairness_report;
use chorefair::mms::maximin_share;
use chorefair::{Allocation, CostFunction, Criterion, Instance, Rational};

fn costs(values: [i128; 7]) -> CostFunction {
    CostFunction::additive(values.map(Rational::from_integer))
}

pub fn run_example() -> chorefair::Result<()> {
    let inst = Instance::new(
        7,
        vec![
            costs([2, 3, 3, 0, 4, 2, 1]),
            costs([3, 1, 3, 2, 5, 0, 5]),
            costs([1, 5, 10, 2, 3, 1, 3]),
        ],
    )?;

    for i in 0..inst.n() {
        let share = maximin_share(&inst, i, inst.n(), inst.chores())?;
        println!("agent {i}: MMS = {}, partition {:?}", share.value, share.witness);
    }

    let crits = [Criterion::Ef, Criterion::Ef1, Criterion::Efx, Criterion::Mms, Criterion::Pmms];
    // Chore e goes to agent assignment[e].
    for (name, assignment) in [("A", [0, 1, 1, 0, 2, 1, 0]), ("B", [0, 1, 2, 1, 0, 1, 0])] {
        let alloc = Allocation::from_assignment(&assignment, inst.n())?;
        let report = fairness_report(&inst, &alloc, &crits)?;
        println!("allocation {name}: bundles {:?}", alloc.bundles());
        for r in &report.results {
            match &r.witness {
                Some(w) => println!("  {:<5} alpha = {:<4} tight at {w:?}", r.criterion, r.alpha),
                None => println!("  {:<5} alpha = {}", r.criterion, r.alpha),
            }
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example runs");
}
