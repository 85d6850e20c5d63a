//! Builds the three shift variants for a 32-site grid and prints their gate
//! census before any lowering.

use qshift::{build_shift, ShiftVariant};

fn main() -> qshift::Result<()> {
    let m = 5;
    for variant in ShiftVariant::ALL {
        let circuit = build_shift(variant, m)?;
        println!("{variant} (m = {m}, {} qubits, {} gates)", circuit.qubit_count(), circuit.len());
        println!("{}\n", circuit.census());
    }
    let parallel = build_shift(ShiftVariant::Parallel, m)?;
    println!("first gates of the parallel shift:");
    for gate in parallel.gates().iter().take(6) {
        println!("  {gate}");
    }
    Ok(())
}
