//! Hadamard walk on 32 sites through the parallel shift circuit, compared
//! against the dense-matrix oracle and drawn as a bar chart.

use qshift::walk::{classical_walk_oracle, compare_variants, run_walk, CoinState, WalkConfig};
use qshift::ShiftVariant;

fn main() -> qshift::Result<()> {
    let mut config = WalkConfig::new(5, 12, ShiftVariant::Parallel);
    config.initial_site = 16;
    config.initial_coin = CoinState::Symmetric;

    let walk = run_walk(&config)?;
    let oracle = classical_walk_oracle(&config)?;
    for (site, p) in walk.distribution.probabilities.iter().enumerate() {
        println!("{site:>3} {p:.4} {}", "#".repeat((p * 200.0).round() as usize));
    }
    println!("deviation from oracle: {:.2e}", walk.distribution.max_deviation(&oracle));
    for (variant, dev) in compare_variants(&config)?.deviations {
        println!("  {variant:<9} {dev:.2e}");
    }
    Ok(())
}
