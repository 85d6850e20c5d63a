//! Exhaustive basis-state check of every variant, plus a look at the
//! permutation table on a few inputs.

use qshift::builders::verify_shift;
use qshift::{build_parallel, extract_permutation, ShiftVariant};

fn main() -> qshift::Result<()> {
    for m in 4..=7 {
        for variant in ShiftVariant::ALL {
            let circuit = qshift::build_shift(variant, m)?;
            let failures = verify_shift(&circuit, 1e-10)?;
            println!("m = {m} {variant:<9} {} / {} wrong", failures.len(), 2 << m);
        }
    }

    let m = 4;
    let circuit = build_parallel(m)?;
    let table = extract_permutation(&circuit, &circuit.layout().ancillas())?;
    println!("\nparallel m = {m}: coin 0 increments, coin 1 decrements");
    for input in [0, 1, 15, 16, 17, 31] {
        let output = table.get(input).expect("valid entry");
        println!("  k={:>2} coin={} -> k={:>2}", input & 15, input >> m, output & 15);
    }
    Ok(())
}
