// Maximin shares under additive and submodular costs.
//
// The class search, the partition enumeration and the additive engine all
// return the same share with a witness partition. Non-additive agents are
// only supported by the first two.

use chorefair::cost::check_submodular;
use chorefair::mms::{maximin_share, mms_share, mms_share_additive_fast, pairwise_mms, subadditive_lower_bound};
use chorefair::{q, ChoreSet, CostFunction, Instance, Rational};

pub fn run_example() -> chorefair::Result<()> {
    let m = 6;
    let additive = CostFunction::additive([q(2, 1), q(2, 1), q(2, 1), q(1, 1), q(1, 1), q(1, 1)]);
    // Chores in the same row are covered together: paying for one row
    // covers every chore in it.
    let coverage = CostFunction::RowCoverage {
        rows: vec![ChoreSet::range(0, 2), ChoreSet::range(2, 4), ChoreSet::range(4, 6)],
        weights: vec![q(3, 1), q(2, 1), q(1, 1)],
    };
    let capped = CostFunction::CappedAdditive {
        values: vec![q(1, 1); m],
        cap: q(4, 1),
    };
    let inst = Instance::new(m, vec![additive, coverage, capped])?;

    for i in 0..inst.n() {
        let f = inst.cost_fn(i);
        println!(
            "agent {i} ({}), submodular: {}",
            f.variant_name(),
            check_submodular(f, m)?
        );
        for k in 1..=3 {
            let class = maximin_share(&inst, i, k, inst.chores())?;
            let rgs = mms_share(&inst, i, k, inst.chores())?;
            assert_eq!(class.value, rgs.value);
            println!(
                "  k = {k}: share {} via {:?}, lower bound {}",
                class.value,
                class.witness,
                subadditive_lower_bound(f, k, inst.chores())
            );
        }
    }

    let fast = mms_share_additive_fast(&inst, 0, 3, inst.chores())?;
    println!("additive engine for agent 0: {}", fast.value);
    let err = mms_share_additive_fast(&inst, 1, 3, inst.chores()).unwrap_err();
    println!("additive engine for agent 1: {err}");

    let a = ChoreSet::from_iter([0, 3]);
    let b = ChoreSet::from_iter([1, 2, 4]);
    let pair = pairwise_mms(&inst, 0, a, b)?;
    println!("pairwise share of agent 0 over {a} and {b}: {}", pair.value);
    assert!(pair.value >= Rational::ZERO);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example runs");
}
