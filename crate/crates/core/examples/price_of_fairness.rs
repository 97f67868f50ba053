// Exact prices of fairness, per instance and over a random sweep.

use chorefair::search::{best_fair_allocation, price_of_fairness};
use chorefair::verify::price_sweep;
use chorefair::{make_family, q, Criterion, FamilyId, FamilyParams, Rational};

pub fn run_example() -> chorefair::Result<()> {
    // The worst case for EF1 with two agents, at a concrete epsilon.
    let family = make_family(FamilyId::PofEf1N2, &FamilyParams::default().with_epsilon(q(1, 100)))?;
    let report = best_fair_allocation(&family.instance, Criterion::Ef1, Rational::ONE)?;
    println!(
        "POF_EF1_N2: OPT {}, cheapest EF1 {}, price {}",
        report.opt_cost,
        report.best_fair_cost.expect("EF1 always exists"),
        report.price.expect("EF1 always exists")
    );
    println!("  closed form {}", family.expected("price").expect("price families carry a price"));

    for (crit, alpha) in [(Criterion::Efx, q(1, 1)), (Criterion::Mms, q(1, 1)), (Criterion::Mms, q(2, 1))] {
        let p = price_of_fairness(&family.instance, crit, alpha)?;
        println!("  {alpha}-{crit} price on the same instance: {p}");
    }

    let sweep = price_sweep(Criterion::Ef1, Rational::ONE, 2, (2, 7), 300, 7)?;
    println!(
        "EF1 over {} random two-agent instances: largest price {}",
        sweep.instances,
        sweep.max_price.expect("EF1 always exists")
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example runs");
}
