// What an approximation for one criterion guarantees for another.

use chorefair::{implied_guarantee, q, Criterion, Setting};

pub fn run_example() -> chorefair::Result<()> {
    let crits = [Criterion::Ef, Criterion::Efx, Criterion::Ef1, Criterion::Pmms, Criterion::Mms];
    for setting in [Setting::Additive, Setting::Submodular] {
        for n in [2, 3, 4] {
            println!("{setting}, n = {n}, source alpha = 1");
            print!("{:>6}", "");
            for dst in crits {
                print!("{dst:>10}");
            }
            println!();
            for src in crits {
                print!("{src:>6}");
                for dst in crits {
                    let cell = implied_guarantee(src, q(1, 1), dst, n, setting)
                        .map_or_else(|e| e.tag().to_string(), |g| g.to_string());
                    print!("{cell:>10}");
                }
                println!();
            }
        }
    }
    let g = implied_guarantee(Criterion::Pmms, q(3, 2), Criterion::Mms, 3, Setting::Additive)?;
    println!("3/2-PMMS gives {g} for MMS with three additive agents");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example runs");
}
