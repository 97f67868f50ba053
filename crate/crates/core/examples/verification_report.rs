// Run the verification suites and print the CSV report.

use chorefair::verify::{self, LemmaConfig};
use chorefair::{q, FamilyId};

pub fn run_example() -> chorefair::Result<()> {
    let families = [FamilyId::Ef1MmsTight, FamilyId::EfxPmmsTight, FamilyId::PmmsNotEf1];
    let mut rows = verify::verify_connections(&families, 4, q(1, 1000))?;
    rows.extend(verify::verify_lemmas(&LemmaConfig {
        seed: 3,
        instances: 50,
        pmms_efx_instances: 20,
    })?);
    verify::sort_canonical(&mut rows);
    verify::write_csv(&rows, std::io::stdout().lock())?;
    let failed = rows.iter().filter(|r| !r.passed()).count();
    println!("{} rows, {failed} failed", rows.len());
    assert!(verify::all_pass(&rows));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example runs");
}
