//! The C4X / CX / C5X pair from the variable part of an n = 7 parallel shift:
//! after ancilla lowering the uncompute ladder of the first gate meets the
//! compute ladder of the second and both vanish.

use qshift::passes::{cancel_adjacent, lower_mcx};
use qshift::{Circuit, Control, Gate, RegisterLayout};

fn main() -> qshift::Result<()> {
    let layout = RegisterLayout::working(6);
    let coin = layout.coin().unwrap();
    let pair = Circuit::from_gates(
        layout,
        [
            Gate::mcx(4, (0..4).map(Control::pos)),
            Gate::mcx(4, [Control::neg(coin)]),
            Gate::mcx(5, (0..5).map(Control::pos)),
        ],
    )?;
    let lowered = lower_mcx(&pair)?;
    let cancelled = cancel_adjacent(&lowered)?;
    for (label, c) in [("lowered", &lowered), ("cancelled", &cancelled)] {
        println!("{label}: {} Toffoli, {} CX", c.census().toffoli(), c.census().cx_total());
        for gate in c.gates() {
            println!("  {gate}");
        }
    }
    Ok(())
}
