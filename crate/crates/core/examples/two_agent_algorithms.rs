// The two-agent algorithms against brute force.
//
// Both algorithms need normalized additive costs. The run prints each
// algorithm's decisions, then compares its social cost with the cheapest
// allocation that meets the same guarantee.

use chorefair::allocators::{alg1_two_agent_ef1, pmms32_two_agent, TraceRecord};
use chorefair::criteria::min_alpha;
use chorefair::instance::normalize;
use chorefair::search::best_fair_allocation;
use chorefair::{q, CostFunction, Criterion, Instance, Rational};

fn show_trace(trace: &[TraceRecord]) {
    for step in trace {
        println!("    {}", serde_json::to_string(step).expect("trace serializes"));
    }
}

pub fn run_example() -> chorefair::Result<()> {
    let raw = Instance::new(
        5,
        vec![
            CostFunction::additive([4, 1, 3, 2, 2].map(Rational::from_integer)),
            CostFunction::additive([1, 5, 1, 1, 4].map(Rational::from_integer)),
        ],
    )?;
    let inst = normalize(&raw)?;

    let ef1 = alg1_two_agent_ef1(&inst)?;
    println!("EF1 algorithm: {:?}, social cost {}", ef1.allocation.bundles(), ef1.social_cost);
    show_trace(&ef1.trace);
    let best = best_fair_allocation(&inst, Criterion::Ef1, Rational::ONE)?;
    println!(
        "  EF1 factor {}, cheapest EF1 cost {}, OPT {}",
        min_alpha(&inst, &ef1.allocation, Criterion::Ef1)?,
        best.best_fair_cost.expect("EF1 allocations exist"),
        best.opt_cost
    );

    let pmms = pmms32_two_agent(&inst)?;
    println!("3/2-PMMS construction: {:?}, social cost {}", pmms.allocation.bundles(), pmms.social_cost);
    show_trace(&pmms.trace);
    println!(
        "  PMMS factor {} (guarantee 3/2)",
        min_alpha(&inst, &pmms.allocation, Criterion::Pmms)?
    );
    assert!(pmms.social_cost <= q(7, 6) * best.opt_cost);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example runs");
}
