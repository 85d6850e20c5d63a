//! Runs the reference pipeline on a parallel shift and prints the census
//! after each stage. Pass a pipeline TOML path to use a different one.

use qshift::{build_parallel, run_pipeline, PassPipeline};

fn main() -> qshift::Result<()> {
    let pipeline = match std::env::args().nth(1) {
        Some(path) => PassPipeline::load(path)?,
        None => PassPipeline::reference(),
    };
    let circuit = build_parallel(8)?;
    println!("{:<24}{:>8}{:>8}{:>8}{:>8}", "stage", "qubits", "gates", "cx", "ccx");
    println!("{:<24}{:>8}{:>8}{:>8}{:>8}", "input", circuit.qubit_count(), circuit.len(), circuit.census().cx_total(), circuit.census().toffoli());
    let run = run_pipeline(&circuit, &pipeline)?;
    for report in &run.log {
        let c = &report.census;
        println!("{:<24}{:>8}{:>8}{:>8}{:>8}", report.stage, report.qubits, c.total(), c.cx_total(), c.toffoli());
    }
    Ok(())
}
