// Build catalog families and compare their closed forms with measurement.

use chorefair::catalog::{default_grid, FamilyKind};
use chorefair::{make_family, q, FamilyId, FamilyParams};

pub fn run_example() -> chorefair::Result<()> {
    for &id in FamilyId::ALL {
        let grid = default_grid(id, 4, q(1, 1000));
        println!("{id:<20} {:?} {:?}, {} grid points", id.kind(), id.setting(), grid.len());
    }

    let picks = [
        (FamilyId::Ef1MmsTight, FamilyParams::default().with_n(3).with_alpha(q(2, 1))),
        (FamilyId::PmmsMmsN3Tight, FamilyParams::default()),
        (FamilyId::SubEfCoverage, FamilyParams::default().with_n(4)),
        (FamilyId::MmsNotEf1, FamilyParams::default().with_n(5).with_p(3)),
    ];
    for (id, params) in picks {
        let b = make_family(id, &params)?;
        assert_eq!(b.kind, FamilyKind::Connection);
        let measured = b.measure()?;
        println!("{id}: n = {}, m = {}", b.instance.n(), b.instance.m());
        println!("  source alpha {} (expected {})", measured.source_alpha, b.expected("source_alpha").unwrap());
        for (crit, got) in &measured.targets {
            println!("  {crit} ratio {got} (expected {})", b.expected_target(*crit).unwrap());
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example runs");
}
