//! Lowering and cancellation passes, and pipelines of them.
//!
//! Every pass maps a circuit to an equivalent circuit. Passes that need
//! scratch qubits (only [`lower_mcx`]) append them to the layout's
//! decomposition block; those qubits start and end in |0⟩.

use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::path::Path;

use serde::Deserialize;

use crate::circuit::{Circuit, Control, Gate, GateCensus, GateKind};
use crate::error::{Error, Result};

/// Replaces every X with three or more controls by a Toffoli ladder over the
/// decomposition ancillas, extending the layout when needed.
pub fn lower_mcx(circuit: &Circuit) -> Result<Circuit> {
    lower_mcx_with(circuit, true)
}

/// [`lower_mcx`] with explicit control over ancilla extension.
///
/// A `C^kX` (k ≥ 3) with controls `c0 < c1 < … < c(k-1)` becomes
/// `Tof(c0,c1→a0)`, `Tof(c_i,a_(i-2)→a_(i-1))` for i = 2..k-1, `CX(a_(k-2)→t)`,
/// then the same Toffolis in reverse: 2(k−1) Toffolis, one CX, k−1 ancillas.
/// Control polarities move unchanged onto the first-layer Toffolis.
pub fn lower_mcx_with(circuit: &Circuit, extend_ancillas: bool) -> Result<Circuit> {
    let needed = circuit
        .gates()
        .iter()
        .filter(|g| g.is_x_family() && g.control_count() >= 3)
        .map(|g| g.control_count() - 1)
        .max()
        .unwrap_or(0);
    let mut layout = *circuit.layout();
    if needed > layout.decomposition_count() {
        if !extend_ancillas {
            return Err(Error::InsufficientAncillas { needed, available: layout.decomposition_count() });
        }
        layout = layout.with_decomposition_ancillas(needed);
    }
    let ancillas: Vec<_> = layout.decomposition_ancillas().collect();

    let mut gates = Vec::with_capacity(circuit.len());
    for gate in circuit.gates() {
        if !(gate.is_x_family() && gate.control_count() >= 3) {
            gates.push(gate.clone());
            continue;
        }
        if let Some(q) = gate.qubits().find(|&q| layout.is_decomposition_ancilla(q)) {
            return Err(Error::AncillaInUse(q));
        }
        let controls = gate.controls();
        let k = controls.len();
        let mut ladder = Vec::with_capacity(k - 1);
        ladder.push(Gate::mcx(ancillas[0], [controls[0], controls[1]]));
        for i in 2..k {
            ladder.push(Gate::mcx(ancillas[i - 1], [controls[i], Control::pos(ancillas[i - 2])]));
        }
        gates.extend(ladder.iter().cloned());
        gates.push(Gate::cx(ancillas[k - 2], gate.target()));
        gates.extend(ladder.into_iter().rev());
    }
    Ok(Circuit::with_gates(layout, gates))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CancelOptions {
    /// Maximum distance, in buffered gates, between the two members of a
    /// cancelling pair. `None` means unbounded.
    pub window: Option<usize>,
}

/// Deletes pairs of identical self-inverse gates (X with any controls, H,
/// SWAP) that become adjacent once intervening gates on disjoint qubits are
/// commuted out of the way. Polarities must match exactly.
pub fn cancel_adjacent(circuit: &Circuit) -> Result<Circuit> {
    cancel_adjacent_with(circuit, CancelOptions::default())
}

pub fn cancel_adjacent_with(circuit: &Circuit, options: CancelOptions) -> Result<Circuit> {
    let cap = circuit.len().saturating_mul(circuit.len()).max(1);
    let mut gates = circuit.gates().to_vec();
    for _ in 0..cap {
        let (next, removed) = cancel_round(&gates, circuit.qubit_count(), options.window);
        gates = next;
        if removed == 0 {
            return Ok(Circuit::with_gates(*circuit.layout(), gates));
        }
    }
    Err(Error::CancellationCap(cap))
}

/// One left-to-right sweep. Each incoming gate is compared with the last
/// buffered gate on its qubits; a pair cancels only if that gate is the
/// latest one on *every* qubit of the incoming gate, so everything between
/// them acts on disjoint qubits.
fn cancel_round(gates: &[Gate], qubits: usize, window: Option<usize>) -> (Vec<Gate>, usize) {
    let mut buffer: Vec<Option<Gate>> = Vec::with_capacity(gates.len());
    let mut latest: Vec<Vec<usize>> = vec![Vec::new(); qubits];
    let mut removed = 0;
    for gate in gates {
        if gate.kind().is_self_inverse() {
            let first = gate.qubits().next().expect("gate acts on a qubit");
            if let Some(&prev) = latest[first.0].last() {
                let in_window = window.is_none_or(|w| buffer.len() - prev <= w);
                let adjacent = gate.qubits().all(|q| latest[q.0].last() == Some(&prev));
                if in_window && adjacent && buffer[prev].as_ref() == Some(gate) {
                    buffer[prev] = None;
                    for q in gate.qubits() {
                        latest[q.0].pop();
                    }
                    removed += 2;
                    continue;
                }
            }
        }
        for q in gate.qubits() {
            latest[q.0].push(buffer.len());
        }
        buffer.push(Some(gate.clone()));
    }
    (buffer.into_iter().flatten().collect(), removed)
}

/// X on each negative control, the positive-control gate, X again.
fn conjugate_negatives(gate: &Gate, lower: impl FnOnce(&Gate) -> Vec<Gate>) -> Vec<Gate> {
    let flips: Vec<Gate> = gate.controls().iter().filter(|c| c.is_negative()).map(|c| Gate::x(c.qubit)).collect();
    let mut out = flips.clone();
    out.extend(lower(&gate.with_positive_controls()));
    out.extend(flips);
    out
}

/// The 6-CX Toffoli network, with T/T† realized as RZ(±π/4). Equal to the
/// Toffoli up to global phase.
fn toffoli_network(c0: crate::circuit::QubitId, c1: crate::circuit::QubitId, t: crate::circuit::QubitId) -> Vec<Gate> {
    let (p, m) = (FRAC_PI_4, -FRAC_PI_4);
    vec![
        Gate::h(t),
        Gate::cx(c1, t),
        Gate::rz(t, m),
        Gate::cx(c0, t),
        Gate::rz(t, p),
        Gate::cx(c1, t),
        Gate::rz(t, m),
        Gate::cx(c0, t),
        Gate::rz(c1, p),
        Gate::rz(t, p),
        Gate::h(t),
        Gate::cx(c0, c1),
        Gate::rz(c0, p),
        Gate::rz(c1, m),
        Gate::cx(c0, c1),
    ]
}

/// Replaces each Toffoli by six CX plus single-qubit gates; negative
/// controls are lowered by X-conjugation first.
pub fn lower_toffoli(circuit: &Circuit) -> Result<Circuit> {
    let mut gates = Vec::with_capacity(circuit.len());
    for gate in circuit.gates() {
        if gate.is_toffoli() {
            gates.extend(conjugate_negatives(gate, |g| {
                toffoli_network(g.controls()[0].qubit, g.controls()[1].qubit, g.target())
            }));
        } else {
            gates.push(gate.clone());
        }
    }
    Ok(Circuit::with_gates(*circuit.layout(), gates))
}

pub fn lower_negative_controls(circuit: &Circuit) -> Result<Circuit> {
    let mut gates = Vec::with_capacity(circuit.len());
    for gate in circuit.gates() {
        if gate.has_negative_controls() {
            gates.extend(conjugate_negatives(gate, |g| vec![g.clone()]));
        } else {
            gates.push(gate.clone());
        }
    }
    Ok(Circuit::with_gates(*circuit.layout(), gates))
}

/// CP(θ) → P(θ/2) on the control, CX, P(−θ/2) on the target, CX, P(θ/2) on
/// the target. Exact, two CX per controlled phase.
pub fn lower_cphase(circuit: &Circuit) -> Result<Circuit> {
    let mut gates = Vec::with_capacity(circuit.len());
    for gate in circuit.gates() {
        match gate.kind() {
            GateKind::CPhase(theta) => gates.extend(conjugate_negatives(gate, |g| {
                let (c, t) = (g.controls()[0].qubit, g.target());
                vec![
                    Gate::phase(c, theta / 2.0),
                    Gate::cx(c, t),
                    Gate::phase(t, -theta / 2.0),
                    Gate::cx(c, t),
                    Gate::phase(t, theta / 2.0),
                ]
            })),
            _ => gates.push(gate.clone()),
        }
    }
    Ok(Circuit::with_gates(*circuit.layout(), gates))
}

/// One pipeline stage with its options.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    LowerMcx { extend_ancillas: bool },
    CancelAdjacent(CancelOptions),
    LowerToffoli,
    LowerNegativeControls,
    LowerCPhase,
}

impl Stage {
    pub const NAMES: [&'static str; 5] =
        ["lower_mcx", "cancel_adjacent", "lower_toffoli", "lower_negative_controls", "lower_cphase"];

    pub fn name(&self) -> &'static str {
        match self {
            Stage::LowerMcx { .. } => "lower_mcx",
            Stage::CancelAdjacent(_) => "cancel_adjacent",
            Stage::LowerToffoli => "lower_toffoli",
            Stage::LowerNegativeControls => "lower_negative_controls",
            Stage::LowerCPhase => "lower_cphase",
        }
    }

    /// Stage with default options.
    pub fn from_name(name: &str) -> Result<Stage> {
        match name {
            "lower_mcx" => Ok(Stage::LowerMcx { extend_ancillas: true }),
            "cancel_adjacent" => Ok(Stage::CancelAdjacent(CancelOptions::default())),
            "lower_toffoli" => Ok(Stage::LowerToffoli),
            "lower_negative_controls" => Ok(Stage::LowerNegativeControls),
            "lower_cphase" => Ok(Stage::LowerCPhase),
            other => Err(Error::UnknownStage(other.to_string())),
        }
    }

    pub fn apply(&self, circuit: &Circuit) -> Result<Circuit> {
        match *self {
            Stage::LowerMcx { extend_ancillas } => lower_mcx_with(circuit, extend_ancillas),
            Stage::CancelAdjacent(options) => cancel_adjacent_with(circuit, options),
            Stage::LowerToffoli => lower_toffoli(circuit),
            Stage::LowerNegativeControls => lower_negative_controls(circuit),
            Stage::LowerCPhase => lower_cphase(circuit),
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Ordered list of stages.
///
/// Config files are TOML, one `[[stage]]` table per stage:
///
/// ```toml
/// [[stage]]
/// pass = "lower_mcx"
/// extend_ancillas = true   # optional, lower_mcx only
///
/// [[stage]]
/// pass = "cancel_adjacent"
/// window = 64              # optional, cancel_adjacent only
/// ```
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PassPipeline {
    pub stages: Vec<Stage>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    stage: Vec<RawStage>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStage {
    pass: String,
    extend_ancillas: Option<bool>,
    window: Option<usize>,
}

pub const REFERENCE_PIPELINE: &str = include_str!("../pipelines/reference.toml");

impl PassPipeline {
    pub fn new(stages: Vec<Stage>) -> Self {
        PassPipeline { stages }
    }

    pub fn empty() -> Self {
        PassPipeline::default()
    }

    /// The shipped reference pipeline: lower_mcx, cancel_adjacent,
    /// lower_toffoli, lower_negative_controls, lower_cphase, cancel_adjacent.
    pub fn reference() -> Self {
        PassPipeline::from_toml(REFERENCE_PIPELINE).expect("reference pipeline parses")
    }

    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        names.iter().map(|n| Stage::from_name(n.as_ref())).collect::<Result<_>>().map(PassPipeline::new)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let mut stages = Vec::with_capacity(raw.stage.len());
        for s in raw.stage {
            let stage = match (Stage::from_name(&s.pass)?, s.extend_ancillas, s.window) {
                (Stage::LowerMcx { .. }, extend, None) => Stage::LowerMcx { extend_ancillas: extend.unwrap_or(true) },
                (Stage::CancelAdjacent(_), None, window) => Stage::CancelAdjacent(CancelOptions { window }),
                (stage, None, None) => stage,
                (stage, _, _) => {
                    return Err(Error::Config(format!("option not accepted by stage `{}`", stage.name())));
                }
            };
            stages.push(stage);
        }
        Ok(PassPipeline { stages })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }
}

/// Census after one stage.
#[derive(Clone, Debug, PartialEq)]
pub struct StageReport {
    pub stage: &'static str,
    pub qubits: usize,
    pub census: GateCensus,
}

#[derive(Clone, Debug)]
pub struct PipelineRun {
    pub circuit: Circuit,
    pub log: Vec<StageReport>,
}

/// Applies the stages in order, recording a census after each.
pub fn run_pipeline(circuit: &Circuit, pipeline: &PassPipeline) -> Result<PipelineRun> {
    let mut current = circuit.clone();
    let mut log = Vec::with_capacity(pipeline.stages.len());
    for stage in &pipeline.stages {
        current = stage.apply(&current)?;
        log.push(StageReport { stage: stage.name(), qubits: current.qubit_count(), census: current.census() });
    }
    Ok(PipelineRun { circuit: current, log })
}
