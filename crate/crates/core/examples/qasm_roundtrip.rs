//! Writes the m = 4 parallel shift as OpenQASM 3.0 in both open-control
//! styles and reads it back.

use qshift::qasm::{export_text, export_text_with, import_text, ExportOptions, NegativeControlStyle};
use qshift::{build_parallel, unitary_equal};

fn main() -> qshift::Result<()> {
    let circuit = build_parallel(4)?;
    let text = export_text(&circuit)?;
    print!("{text}");
    assert_eq!(import_text(&text)?, circuit);

    let flat = export_text_with(&circuit, ExportOptions { negative_controls: NegativeControlStyle::XConjugate })?;
    let back = import_text(&flat)?;
    let cmp = unitary_equal(&circuit, &back, 1e-12)?;
    println!("\nx-conjugated form: {} lines, same unitary: {}", flat.lines().count(), cmp.equal);
    Ok(())
}
