//! The three basis-state shift circuits.
//!
//! Every builder takes the position-register width `m` (a cyclic grid of
//! 2^m sites) and returns a circuit over [`RegisterLayout::working`], plus
//! the ancilla `a` for the parallel variant. Coin convention, shared by all
//! variants and by the walk oracle: coin |0⟩ increments (`k → k+1 mod 2^m`),
//! coin |1⟩ decrements.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::circuit::{Circuit, Control, Gate, QubitId, RegisterLayout};
use crate::error::{Error, Result};
use crate::sim::{basis_permutation, extract_permutation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, clap::ValueEnum)]
pub enum ShiftVariant {
    /// Two cascades of multi-controlled X gates.
    Canonical,
    /// Fourier-diagonalized shift, F⁻¹PF.
    Qft,
    /// Even/odd decomposition with a single inverter.
    Parallel,
}

impl ShiftVariant {
    pub const ALL: [ShiftVariant; 3] = [ShiftVariant::Canonical, ShiftVariant::Qft, ShiftVariant::Parallel];

    pub fn name(self) -> &'static str {
        match self {
            ShiftVariant::Canonical => "canonical",
            ShiftVariant::Qft => "qft",
            ShiftVariant::Parallel => "parallel",
        }
    }

    /// Smallest supported position-register width.
    pub fn min_position_qubits(self) -> usize {
        match self {
            ShiftVariant::Parallel => 4,
            _ => 1,
        }
    }

    /// Whether the circuit is built from X-family gates only.
    pub fn is_x_family(self) -> bool {
        self != ShiftVariant::Qft
    }
}

impl fmt::Display for ShiftVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ShiftVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ShiftVariant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown shift variant `{s}`")))
    }
}

/// The expected image of working-register basis index `index` (position in
/// the low `m` bits, coin at bit `m`).
pub fn expected_shift(m: usize, index: usize) -> usize {
    let n = 1usize << m;
    let k = index & (n - 1);
    let coin = index >> m & 1;
    let k2 = if coin == 0 { (k + 1) % n } else { (k + n - 1) % n };
    k2 | coin << m
}

fn check_m(variant: ShiftVariant, m: usize) -> Result<()> {
    let min = variant.min_position_qubits();
    if m < min {
        return Err(Error::PositionQubits { variant: variant.name(), m, min });
    }
    Ok(())
}

pub fn build_shift(variant: ShiftVariant, m: usize) -> Result<Circuit> {
    match variant {
        ShiftVariant::Canonical => build_canonical(m),
        ShiftVariant::Qft => build_qft(m),
        ShiftVariant::Parallel => build_parallel(m),
    }
}

/// Increment cascade on coin |0⟩ followed by the decrement cascade on coin |1⟩.
/// Each cascade runs from the widest gate (target = most significant
/// position qubit) down to the single coin-controlled X on qubit 0.
pub fn build_canonical(m: usize) -> Result<Circuit> {
    check_m(ShiftVariant::Canonical, m)?;
    let layout = RegisterLayout::working(m);
    let coin = layout.coin().expect("working layout has a coin");
    let mut circuit = Circuit::new(layout);
    for (coin_ctrl, carry) in [(Control::neg(coin), Control::pos as fn(usize) -> Control), (Control::pos(coin), Control::neg)] {
        for j in (0..m).rev() {
            let controls = (0..j).map(carry).chain([coin_ctrl]);
            circuit.push(Gate::mcx(j, controls))?;
        }
    }
    Ok(circuit)
}

/// Fourier transform without the final bit reversal: H on qubit j followed
/// by controlled phases from every lower qubit, most significant qubit first.
pub fn qft_gates(qubits: &[QubitId]) -> Vec<Gate> {
    let mut gates = Vec::new();
    for j in (0..qubits.len()).rev() {
        gates.push(Gate::h(qubits[j]));
        for l in (0..j).rev() {
            let theta = PI / (1u64 << (j - l)) as f64;
            gates.push(Gate::cphase(Control::pos(qubits[l]), qubits[j], theta));
        }
    }
    gates
}

/// F⁻¹ P F with a coin-dependent phase layer.
///
/// The transform leaves its output bit-reversed, so the increment phase for
/// qubit b is π/2^b. Each layer entry is P(θ_b) followed by CP(−2θ_b) on the
/// coin, giving e^{+iθ_b} on coin |0⟩ and e^{−iθ_b} on coin |1⟩. Two-qubit
/// census: m(m−1) transform phases plus m layer phases, i.e. m² = (n−1)² for
/// a working register of n = m+1 qubits.
pub fn build_qft(m: usize) -> Result<Circuit> {
    check_m(ShiftVariant::Qft, m)?;
    let layout = RegisterLayout::working(m);
    let coin = layout.coin().expect("working layout has a coin");
    let position: Vec<QubitId> = layout.position_qubits().collect();
    let forward = qft_gates(&position);

    let mut circuit = Circuit::new(layout);
    circuit.extend(forward.iter().cloned())?;
    for (b, &q) in position.iter().enumerate() {
        let theta = PI / (1u64 << b) as f64;
        circuit.push(Gate::phase(q, theta))?;
        circuit.push(Gate::cphase(Control::pos(coin), q, -2.0 * theta))?;
    }
    circuit.extend(forward.iter().rev().map(Gate::inverse))?;
    Ok(circuit)
}

/// The parallel shift split into its stages, in circuit order.
#[derive(Clone, Debug, PartialEq)]
pub struct ParallelSections {
    pub layout: RegisterLayout,
    /// D: parity of the position (xor coin) into the ancilla.
    pub decompose: Vec<Gate>,
    /// R, constant part.
    pub rearrange: Vec<Gate>,
    /// The single X on qubit 0.
    pub invert: Vec<Gate>,
    /// Coin-|0⟩ carry chain over the upper position qubits; empty for m = 4.
    pub variable: Vec<Gate>,
    /// D⁻¹ and the final ancilla reset.
    pub recompose: Vec<Gate>,
}

impl ParallelSections {
    pub fn gates(&self) -> impl Iterator<Item = &Gate> {
        self.decompose
            .iter()
            .chain(&self.rearrange)
            .chain(&self.invert)
            .chain(&self.variable)
            .chain(&self.recompose)
    }

    pub fn circuit(&self) -> Result<Circuit> {
        Circuit::from_gates(self.layout, self.gates().cloned())
    }
}

const CONSTANT_PART: &str = include_str!("../fixtures/parallel_constant.txt");

#[derive(Debug, Default)]
struct ConstantPart {
    decompose: Vec<Gate>,
    rearrange: Vec<Gate>,
    invert: Vec<Gate>,
    recompose: Vec<Gate>,
}

fn parse_constant_part(text: &str, layout: &RegisterLayout) -> Result<ConstantPart> {
    let coin = layout.coin().expect("working layout has a coin");
    let a = layout.parallel_ancilla().expect("parallel layout has an ancilla");
    let qubit = |name: &str, line: usize| -> Result<QubitId> {
        match name {
            "coin" => Ok(coin),
            "a" => Ok(a),
            _ => name
                .strip_prefix('q')
                .and_then(|i| i.parse::<usize>().ok())
                .filter(|&i| i < 4)
                .map(QubitId)
                .ok_or_else(|| Error::Parse { line, message: format!("unknown qubit `{name}`") }),
        }
    };

    let mut part = ConstantPart::default();
    let mut section: Option<&mut Vec<Gate>> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(name) = body.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            section = Some(match name {
                "decompose" => &mut part.decompose,
                "rearrange" => &mut part.rearrange,
                "invert" => &mut part.invert,
                "recompose" => &mut part.recompose,
                _ => return Err(Error::Parse { line, message: format!("unknown section `{name}`") }),
            });
            continue;
        }
        let mut words = body.split_whitespace();
        if words.next() != Some("x") {
            return Err(Error::Parse { line, message: "expected `x`".into() });
        }
        let target = qubit(words.next().ok_or_else(|| Error::Parse { line, message: "missing target".into() })?, line)?;
        let controls = words
            .map(|w| match w.split_at(1) {
                ("+", name) => qubit(name, line).map(Control::pos),
                ("-", name) => qubit(name, line).map(Control::neg),
                _ => Err(Error::Parse { line, message: format!("bad control `{w}`") }),
            })
            .collect::<Result<Vec<_>>>()?;
        let gate = Gate::mcx(target, controls);
        gate.validate(layout.total_qubits())?;
        section
            .as_mut()
            .ok_or_else(|| Error::Parse { line, message: "gate outside a section".into() })?
            .push(gate);
    }
    Ok(part)
}

/// Stages of the parallel shift for `m ≥ 4` position qubits.
pub fn parallel_sections(m: usize) -> Result<ParallelSections> {
    check_m(ShiftVariant::Parallel, m)?;
    let layout = RegisterLayout::working(m).with_parallel_ancilla();
    let coin = layout.coin().expect("working layout has a coin");
    let part = parse_constant_part(CONSTANT_PART, &layout)?;

    let mut variable = Vec::new();
    if m >= 5 {
        let flip = |q: usize| Gate::mcx(q, [Control::neg(coin)]);
        variable.extend((0..4).map(flip));
        for j in 4..m {
            if j > 4 {
                variable.push(flip(j - 1));
            }
            variable.push(Gate::mcx(j, (0..j).map(Control::pos)));
        }
        variable.extend((0..m - 1).rev().map(flip));
    }

    Ok(ParallelSections {
        layout,
        decompose: part.decompose,
        rearrange: part.rearrange,
        invert: part.invert,
        variable,
        recompose: part.recompose,
    })
}

/// D⁻¹ X R D, followed by the ancilla reset.
pub fn build_parallel(m: usize) -> Result<Circuit> {
    parallel_sections(m)?.circuit()
}

/// A working-register basis state the circuit sends to the wrong place.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShiftFailure {
    pub m: usize,
    pub input: usize,
    pub expected: usize,
    /// `None` when the output is not a clean basis state with ancillas at |0⟩.
    pub found: Option<usize>,
}

fn basis_label(m: usize, index: usize) -> String {
    format!("|k={}, coin={}>", index & ((1 << m) - 1), index >> m & 1)
}

impl fmt::Display for ShiftFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let found = self.found.map_or_else(|| "a superposition or dirty ancilla".to_string(), |j| basis_label(self.m, j));
        write!(f, "{} -> {}, expected {}", basis_label(self.m, self.input), found, basis_label(self.m, self.expected))
    }
}

/// Checks every working basis state against the shift, ancillas starting at
/// |0⟩. X-only circuits are evaluated classically and exactly; anything else
/// by statevector with amplitude tolerance `tol`.
pub fn verify_shift(circuit: &Circuit, tol: f64) -> Result<Vec<ShiftFailure>> {
    let layout = circuit.layout();
    if layout.coin().is_none() {
        return Err(Error::InvalidArgument("circuit has no coin qubit".into()));
    }
    let m = layout.position_count();
    let ancillas = layout.ancillas();
    let table = if circuit.gates().iter().all(Gate::is_x_family) {
        extract_permutation(circuit, &ancillas)?
    } else {
        basis_permutation(circuit, &ancillas, tol)?
    };
    Ok(table
        .mapping()
        .iter()
        .enumerate()
        .filter_map(|(input, &found)| {
            let expected = expected_shift(m, input);
            (found != Some(expected)).then_some(ShiftFailure { m, input, expected, found })
        })
        .collect())
}
