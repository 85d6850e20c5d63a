//! Predicted versus measured CX counts for n = 5..25 working qubits, and the
//! size at which the parallel shift overtakes the Fourier one.

use qshift::analysis::{crossover_point, format_aligned, scaling_table, SizeRange};
use qshift::{PassPipeline, ShiftVariant};

fn main() -> qshift::Result<()> {
    let rows = scaling_table(SizeRange::new(5, 25, 1)?, &ShiftVariant::ALL, &PassPipeline::reference())?;
    print!("{}", format_aligned(&rows));
    println!("\nparallel beats qft from n = {}", crossover_point());
    Ok(())
}
