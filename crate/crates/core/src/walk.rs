//! Discrete-time coined quantum walk on a cycle of `2^m` sites.
//!
//! One step is a coin flip on the coin qubit followed by the shift circuit.
//! The shift convention is the builders' one: coin |0⟩ moves k → k+1 and
//! coin |1⟩ moves k → k−1. The textbook operator
//! `|0⟩⟨0| ⊗ Σ|k−1⟩⟨k| + |1⟩⟨1| ⊗ Σ|k+1⟩⟨k|` uses the opposite labelling;
//! the two walks are mirror images of each other.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::builders::{build_shift, ShiftVariant};
use crate::circuit::Gate;
use crate::error::{Error, Result};
use crate::sim::{StateVector, MAX_QUBITS};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum CoinKind {
    #[default]
    Hadamard,
}

impl CoinKind {
    fn matrix(self) -> [[Complex64; 2]; 2] {
        match self {
            CoinKind::Hadamard => {
                let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                [[h, h], [h, -h]]
            }
        }
    }

    fn gate(self, coin: usize) -> Gate {
        match self {
            CoinKind::Hadamard => Gate::h(coin),
        }
    }
}

impl FromStr for CoinKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hadamard" | "h" => Ok(CoinKind::Hadamard),
            _ => Err(Error::InvalidArgument(format!("unknown coin `{s}`"))),
        }
    }
}

/// Initial coin state.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum CoinState {
    #[default]
    Zero,
    One,
    /// (|0⟩ + i|1⟩)/√2, which makes the Hadamard walk left-right symmetric.
    Symmetric,
    Amplitudes(Complex64, Complex64),
}

impl CoinState {
    pub fn amplitudes(self) -> (Complex64, Complex64) {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            CoinState::Zero => (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
            CoinState::One => (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)),
            CoinState::Symmetric => (Complex64::new(s, 0.0), Complex64::new(0.0, s)),
            CoinState::Amplitudes(a, b) => (a, b),
        }
    }
}

impl FromStr for CoinState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "0" => Ok(CoinState::Zero),
            "1" => Ok(CoinState::One),
            "symmetric" | "sym" => Ok(CoinState::Symmetric),
            _ => Err(Error::InvalidArgument(format!("unknown coin state `{s}` (expected 0, 1 or symmetric)"))),
        }
    }
}

impl fmt::Display for CoinState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoinState::Zero => f.write_str("0"),
            CoinState::One => f.write_str("1"),
            CoinState::Symmetric => f.write_str("symmetric"),
            CoinState::Amplitudes(a, b) => write!(f, "({a}, {b})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WalkConfig {
    pub m: usize,
    pub steps: usize,
    pub coin: CoinKind,
    pub initial_site: usize,
    pub initial_coin: CoinState,
    pub variant: ShiftVariant,
}

impl WalkConfig {
    pub fn new(m: usize, steps: usize, variant: ShiftVariant) -> Self {
        WalkConfig { m, steps, coin: CoinKind::Hadamard, initial_site: 0, initial_coin: CoinState::Zero, variant }
    }

    pub fn sites(&self) -> usize {
        1 << self.m
    }

    fn validate(&self) -> Result<()> {
        if self.m == 0 || self.m >= MAX_QUBITS {
            return Err(Error::InvalidArgument(format!("m = {} out of range", self.m)));
        }
        if self.initial_site >= self.sites() {
            return Err(Error::InvalidArgument(format!(
                "initial site {} outside 0..{}",
                self.initial_site,
                self.sites()
            )));
        }
        let (a, b) = self.initial_coin.amplitudes();
        if ((a.norm_sqr() + b.norm_sqr()) - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument("initial coin state is not normalized".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PositionDistribution {
    pub probabilities: Vec<f64>,
}

impl PositionDistribution {
    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    pub fn max_deviation(&self, other: &PositionDistribution) -> f64 {
        assert_eq!(self.probabilities.len(), other.probabilities.len());
        self.probabilities.iter().zip(&other.probabilities).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// `site,probability` with a header line. Sites whose probability is
    /// below `1e-15` are omitted; probabilities use shortest round-trip
    /// formatting.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("site,probability\n");
        for (site, p) in self.probabilities.iter().enumerate() {
            if *p >= 1e-15 {
                out.push_str(&format!("{site},{p:?}\n"));
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct WalkOutcome {
    pub distribution: PositionDistribution,
    pub state: StateVector,
    /// Probability found outside the all-ancillas-|0⟩ subspace.
    pub ancilla_leakage: f64,
}

/// Simulates the walk through the variant's shift circuit.
pub fn run_walk(config: &WalkConfig) -> Result<WalkOutcome> {
    run_walk_observed(config, |_, _| {})
}

/// As [`run_walk`], calling `observe(step, state)` after every step.
pub fn run_walk_observed(config: &WalkConfig, mut observe: impl FnMut(usize, &StateVector)) -> Result<WalkOutcome> {
    config.validate()?;
    let shift = build_shift(config.variant, config.m)?;
    let coin = shift.layout().coin().expect("shift circuits carry a coin").index();
    let (a, b) = config.initial_coin.amplitudes();
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << shift.qubit_count()];
    amps[config.initial_site] = a;
    amps[config.initial_site | 1 << coin] = b;
    let mut state = StateVector::from_amplitudes(amps)?;
    let coin_gate = config.coin.gate(coin);
    for step in 1..=config.steps {
        state.apply(&coin_gate)?;
        for gate in shift.gates() {
            state.apply(gate)?;
        }
        observe(step, &state);
    }
    let sites = config.sites();
    let mut probabilities = vec![0.0; sites];
    let mut leakage = 0.0;
    for (index, amp) in state.amplitudes().iter().enumerate() {
        if index >> (coin + 1) == 0 {
            probabilities[index & (sites - 1)] += amp.norm_sqr();
        } else {
            leakage += amp.norm_sqr();
        }
    }
    Ok(WalkOutcome { distribution: PositionDistribution { probabilities }, state, ancilla_leakage: leakage })
}

/// Which coin value moves the walker towards larger sites.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CoinConvention {
    #[default]
    ZeroIncrements,
    ZeroDecrements,
}

pub const MAX_ORACLE_M: usize = 12;

/// Reference distribution from an explicit dense step matrix, no circuits.
pub fn classical_walk_oracle(config: &WalkConfig) -> Result<PositionDistribution> {
    classical_walk_oracle_with(config, CoinConvention::ZeroIncrements)
}

pub fn classical_walk_oracle_with(config: &WalkConfig, convention: CoinConvention) -> Result<PositionDistribution> {
    config.validate()?;
    if config.m > MAX_ORACLE_M {
        return Err(Error::TooManyQubits(config.m + 1));
    }
    let n = config.sites();
    let dim = 2 * n;
    // Basis index c*n + k for coin c, site k.
    let zero = Complex64::new(0.0, 0.0);
    let c = config.coin.matrix();
    let step_of = |coin: usize| -> usize {
        match (convention, coin) {
            (CoinConvention::ZeroIncrements, 0) | (CoinConvention::ZeroDecrements, 1) => 1,
            _ => n - 1,
        }
    };
    // U = S (C ⊗ I); S|c,k⟩ = |c, k + step(c)⟩.
    let mut u = vec![zero; dim * dim];
    for c_in in 0..2 {
        for k in 0..n {
            for (c_out, coin_row) in c.iter().enumerate() {
                let row = c_out * n + (k + step_of(c_out)) % n;
                u[row * dim + c_in * n + k] += coin_row[c_in];
            }
        }
    }
    let (a, b) = config.initial_coin.amplitudes();
    let mut psi = vec![zero; dim];
    psi[config.initial_site] = a;
    psi[n + config.initial_site] = b;
    for _ in 0..config.steps {
        psi = (0..dim)
            .into_par_iter()
            .map(|r| u[r * dim..(r + 1) * dim].iter().zip(&psi).map(|(x, y)| x * y).sum())
            .collect();
    }
    let probabilities = (0..n).map(|k| psi[k].norm_sqr() + psi[n + k].norm_sqr()).collect();
    Ok(PositionDistribution { probabilities })
}

#[derive(Clone, Debug, PartialEq)]
pub struct VariantComparison {
    pub deviations: Vec<(ShiftVariant, f64)>,
}

impl VariantComparison {
    pub fn max_deviation(&self) -> f64 {
        self.deviations.iter().map(|(_, d)| *d).fold(0.0, f64::max)
    }
}

/// Runs every variant buildable at `config.m` and reports each one's
/// entrywise deviation from the oracle. `config.variant` is ignored.
pub fn compare_variants(config: &WalkConfig) -> Result<VariantComparison> {
    let oracle = classical_walk_oracle(config)?;
    let deviations = ShiftVariant::ALL
        .into_par_iter()
        .filter(|v| config.m >= v.min_position_qubits())
        .map(|variant| {
            let walk = run_walk(&WalkConfig { variant, ..*config })?;
            Ok((variant, walk.distribution.max_deviation(&oracle)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VariantComparison { deviations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ShiftVariant::*;

    #[test]
    fn zero_steps_is_point_mass() {
        let mut cfg = WalkConfig::new(4, 0, Parallel);
        cfg.initial_site = 5;
        let d = run_walk(&cfg).unwrap().distribution;
        assert_eq!(d.probabilities[5], 1.0);
        assert_eq!(d.total(), 1.0);
        assert_eq!(classical_walk_oracle(&cfg).unwrap(), d);
        assert_eq!(d.to_csv(), "site,probability\n5,1.0\n");
        assert_eq!(compare_variants(&cfg).unwrap().max_deviation(), 0.0);
    }

    #[test]
    fn one_step_splits_evenly() {
        for variant in ShiftVariant::ALL {
            let mut cfg = WalkConfig::new(4, 1, variant);
            cfg.initial_site = 0;
            let d = run_walk(&cfg).unwrap().distribution;
            assert!((d.probabilities[1] - 0.5).abs() < 1e-12, "{variant}");
            assert!((d.probabilities[15] - 0.5).abs() < 1e-12, "{variant}");
        }
    }

    #[test]
    fn ten_steps_m5_matches_oracle() {
        let mut cfg = WalkConfig::new(5, 10, Parallel);
        cfg.initial_site = 16;
        let walk = run_walk(&cfg).unwrap();
        let oracle = classical_walk_oracle(&cfg).unwrap();
        assert!(walk.distribution.max_deviation(&oracle) < 1e-10);
        assert!(walk.ancilla_leakage < 1e-20);
    }

    #[test]
    fn symmetric_coin_gives_symmetric_spread() {
        let mut cfg = WalkConfig::new(5, 2, Canonical);
        cfg.initial_site = 10;
        cfg.initial_coin = CoinState::Symmetric;
        let d = classical_walk_oracle(&cfg).unwrap().probabilities;
        for off in 1..=2 {
            assert!((d[10 + off] - d[10 - off]).abs() < 1e-12);
        }
        cfg.steps = 12;
        let d = run_walk(&cfg).unwrap().distribution.probabilities;
        for off in 1..=12 {
            assert!((d[(10 + off) % 32] - d[(32 + 10 - off) % 32]).abs() < 1e-12);
        }
    }

    #[test]
    fn normalization_holds_every_step() {
        let cfg = WalkConfig::new(5, 100, Parallel);
        let mut worst: f64 = 0.0;
        run_walk_observed(&cfg, |_, s| worst = worst.max((s.norm() - 1.0).abs())).unwrap();
        assert!(worst < 1e-10, "{worst}");
    }

    #[test]
    fn flipped_convention_breaks_comparison() {
        let mut cfg = WalkConfig::new(4, 3, Parallel);
        cfg.initial_site = 3;
        let walk = run_walk(&cfg).unwrap().distribution;
        let right = classical_walk_oracle_with(&cfg, CoinConvention::ZeroIncrements).unwrap();
        let wrong = classical_walk_oracle_with(&cfg, CoinConvention::ZeroDecrements).unwrap();
        assert!(walk.max_deviation(&right) < 1e-12);
        assert!(walk.max_deviation(&wrong) > 0.1);
    }

    #[test]
    fn config_errors() {
        let mut cfg = WalkConfig::new(4, 1, Qft);
        cfg.initial_site = 16;
        assert!(run_walk(&cfg).is_err());
        cfg.initial_site = 0;
        cfg.initial_coin = CoinState::Amplitudes(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
        assert!(classical_walk_oracle(&cfg).is_err());
        assert!(run_walk(&WalkConfig::new(3, 1, Parallel)).is_err());
        assert!("pauli".parse::<CoinKind>().is_err());
        assert_eq!("sym".parse::<CoinState>().unwrap(), CoinState::Symmetric);
    }
}
