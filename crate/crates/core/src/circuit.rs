//! Gates, register layouts and circuits.
//!
//! Qubit 0 is the least significant bit of a basis index: in a state vector,
//! amplitude `k` belongs to the basis state whose bit `j` is the value of
//! qubit `j`. Controls carry a polarity so open (|0⟩-activated) controls are
//! first-class and only lowered by explicit passes.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign};

use crate::error::{Error, Result};

/// Position of a qubit in the global ordering of a circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QubitId(pub usize);

impl QubitId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }

    #[inline]
    pub(crate) fn bit(self) -> usize {
        1usize << self.0
    }
}

impl From<usize> for QubitId {
    fn from(index: usize) -> Self {
        QubitId(index)
    }
}

impl fmt::Display for QubitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    /// Activates on |1⟩ (filled dot).
    Positive,
    /// Activates on |0⟩ (open dot).
    Negative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Control {
    pub qubit: QubitId,
    pub polarity: Polarity,
}

impl Control {
    pub fn pos(qubit: impl Into<QubitId>) -> Self {
        Control { qubit: qubit.into(), polarity: Polarity::Positive }
    }

    pub fn neg(qubit: impl Into<QubitId>) -> Self {
        Control { qubit: qubit.into(), polarity: Polarity::Negative }
    }

    pub fn is_negative(&self) -> bool {
        self.polarity == Polarity::Negative
    }

    /// The positive-polarity control on the same qubit.
    pub fn positive(self) -> Self {
        Control { polarity: Polarity::Positive, ..self }
    }
}

impl fmt::Display for Control {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.polarity {
            Polarity::Positive => '+',
            Polarity::Negative => '-',
        };
        write!(f, "{}{}", sign, self.qubit)
    }
}

/// Gate operation. `X` carries any number of controls (0 = X, 1 = CX,
/// 2 = Toffoli, k = C^kX); `CPhase` carries exactly one control; every other
/// kind is uncontrolled.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateKind {
    X,
    H,
    Rz(f64),
    Phase(f64),
    Sx,
    Sxdg,
    CPhase(f64),
    Swap,
}

/// Angle-free tag of a [`GateKind`], used as a census key.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GateTag {
    X,
    H,
    Rz,
    Phase,
    Sx,
    Sxdg,
    CPhase,
    Swap,
}

impl GateKind {
    pub fn tag(&self) -> GateTag {
        match self {
            GateKind::X => GateTag::X,
            GateKind::H => GateTag::H,
            GateKind::Rz(_) => GateTag::Rz,
            GateKind::Phase(_) => GateTag::Phase,
            GateKind::Sx => GateTag::Sx,
            GateKind::Sxdg => GateTag::Sxdg,
            GateKind::CPhase(_) => GateTag::CPhase,
            GateKind::Swap => GateTag::Swap,
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            GateKind::Rz(a) | GateKind::Phase(a) | GateKind::CPhase(a) => Some(a),
            _ => None,
        }
    }

    pub fn is_self_inverse(&self) -> bool {
        matches!(self, GateKind::X | GateKind::H | GateKind::Swap)
    }

    fn inverse(&self) -> GateKind {
        match *self {
            GateKind::Rz(a) => GateKind::Rz(-a),
            GateKind::Phase(a) => GateKind::Phase(-a),
            GateKind::CPhase(a) => GateKind::CPhase(-a),
            GateKind::Sx => GateKind::Sxdg,
            GateKind::Sxdg => GateKind::Sx,
            other => other,
        }
    }
}

impl fmt::Display for GateTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            GateTag::X => "x",
            GateTag::H => "h",
            GateTag::Rz => "rz",
            GateTag::Phase => "p",
            GateTag::Sx => "sx",
            GateTag::Sxdg => "sxdg",
            GateTag::CPhase => "cp",
            GateTag::Swap => "swap",
        };
        f.write_str(name)
    }
}

/// A single circuit element.
///
/// Controls are kept sorted by qubit and swap targets in ascending order, so
/// two gates acting identically compare equal.
#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    kind: GateKind,
    targets: Vec<QubitId>,
    controls: Vec<Control>,
}

impl Gate {
    /// Builds a gate, checking arity, distinctness and angle finiteness.
    /// Qubit range is checked when the gate enters a circuit.
    pub fn new(kind: GateKind, targets: Vec<QubitId>, controls: Vec<Control>) -> Result<Self> {
        let gate = Self::normalized(kind, targets, controls);
        gate.check_shape()?;
        Ok(gate)
    }

    fn normalized(kind: GateKind, mut targets: Vec<QubitId>, mut controls: Vec<Control>) -> Self {
        controls.sort();
        if kind == GateKind::Swap {
            targets.sort();
        }
        Gate { kind, targets, controls }
    }

    pub fn x(target: impl Into<QubitId>) -> Self {
        Self::normalized(GateKind::X, vec![target.into()], Vec::new())
    }

    pub fn cx(control: impl Into<QubitId>, target: impl Into<QubitId>) -> Self {
        Self::mcx(target, [Control::pos(control)])
    }

    pub fn ccx(c0: impl Into<QubitId>, c1: impl Into<QubitId>, target: impl Into<QubitId>) -> Self {
        Self::mcx(target, [Control::pos(c0), Control::pos(c1)])
    }

    /// X on `target` with any number of controls.
    pub fn mcx(target: impl Into<QubitId>, controls: impl IntoIterator<Item = Control>) -> Self {
        Self::normalized(GateKind::X, vec![target.into()], controls.into_iter().collect())
    }

    pub fn h(target: impl Into<QubitId>) -> Self {
        Self::normalized(GateKind::H, vec![target.into()], Vec::new())
    }

    pub fn rz(target: impl Into<QubitId>, theta: f64) -> Self {
        Self::normalized(GateKind::Rz(theta), vec![target.into()], Vec::new())
    }

    pub fn phase(target: impl Into<QubitId>, theta: f64) -> Self {
        Self::normalized(GateKind::Phase(theta), vec![target.into()], Vec::new())
    }

    pub fn sx(target: impl Into<QubitId>) -> Self {
        Self::normalized(GateKind::Sx, vec![target.into()], Vec::new())
    }

    pub fn sxdg(target: impl Into<QubitId>) -> Self {
        Self::normalized(GateKind::Sxdg, vec![target.into()], Vec::new())
    }

    pub fn cphase(control: Control, target: impl Into<QubitId>, theta: f64) -> Self {
        Self::normalized(GateKind::CPhase(theta), vec![target.into()], vec![control])
    }

    pub fn swap(a: impl Into<QubitId>, b: impl Into<QubitId>) -> Self {
        Self::normalized(GateKind::Swap, vec![a.into(), b.into()], Vec::new())
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn targets(&self) -> &[QubitId] {
        &self.targets
    }

    pub fn target(&self) -> QubitId {
        self.targets[0]
    }

    pub fn controls(&self) -> &[Control] {
        &self.controls
    }

    pub fn control_count(&self) -> usize {
        self.controls.len()
    }

    pub fn has_negative_controls(&self) -> bool {
        self.controls.iter().any(Control::is_negative)
    }

    /// Every qubit the gate touches, controls first.
    pub fn qubits(&self) -> impl Iterator<Item = QubitId> + '_ {
        self.controls.iter().map(|c| c.qubit).chain(self.targets.iter().copied())
    }

    /// X gate with any number of controls (the X family).
    pub fn is_x_family(&self) -> bool {
        self.kind == GateKind::X
    }

    pub fn is_toffoli(&self) -> bool {
        self.kind == GateKind::X && self.controls.len() == 2
    }

    pub fn inverse(&self) -> Gate {
        Gate { kind: self.kind.inverse(), targets: self.targets.clone(), controls: self.controls.clone() }
    }

    /// Same gate with every negative control flipped to positive.
    pub fn with_positive_controls(&self) -> Gate {
        let controls = self.controls.iter().map(|c| c.positive()).collect();
        Self::normalized(self.kind, self.targets.clone(), controls)
    }

    /// Rewrites every qubit through `map`.
    pub fn remap(&self, map: impl Fn(QubitId) -> QubitId) -> Gate {
        let targets = self.targets.iter().map(|&q| map(q)).collect();
        let controls = self
            .controls
            .iter()
            .map(|c| Control { qubit: map(c.qubit), polarity: c.polarity })
            .collect();
        Self::normalized(self.kind, targets, controls)
    }

    fn check_shape(&self) -> Result<()> {
        let want_targets = if self.kind == GateKind::Swap { 2 } else { 1 };
        if self.targets.len() != want_targets {
            return Err(Error::InvalidGate(format!(
                "{} takes {} target(s), got {}",
                self.kind.tag(),
                want_targets,
                self.targets.len()
            )));
        }
        match self.kind {
            GateKind::X => {}
            GateKind::CPhase(_) if self.controls.len() != 1 => {
                return Err(Error::InvalidGate(format!(
                    "cp takes exactly one control, got {}",
                    self.controls.len()
                )));
            }
            GateKind::CPhase(_) => {}
            _ if !self.controls.is_empty() => {
                return Err(Error::InvalidGate(format!("{} cannot be controlled", self.kind.tag())));
            }
            _ => {}
        }
        if let Some(a) = self.kind.angle() {
            if !a.is_finite() {
                return Err(Error::InvalidGate(format!("non-finite angle {a}")));
            }
        }
        let mut seen: Vec<QubitId> = self.qubits().collect();
        seen.sort();
        if let Some(w) = seen.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateQubit(w[0]));
        }
        Ok(())
    }

    /// Full validation against a register of `qubit_count` qubits.
    pub fn validate(&self, qubit_count: usize) -> Result<()> {
        self.check_shape()?;
        if let Some(q) = self.qubits().find(|q| q.0 >= qubit_count) {
            return Err(Error::QubitOutOfRange { qubit: q, count: qubit_count });
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GateKind::X => match self.controls.len() {
                0 => write!(f, "X")?,
                1 => write!(f, "CX")?,
                k => write!(f, "C{k}X")?,
            },
            GateKind::Rz(a) => write!(f, "RZ({a})")?,
            GateKind::Phase(a) => write!(f, "P({a})")?,
            GateKind::CPhase(a) => write!(f, "CP({a})")?,
            GateKind::H => write!(f, "H")?,
            GateKind::Sx => write!(f, "SX")?,
            GateKind::Sxdg => write!(f, "SXdg")?,
            GateKind::Swap => write!(f, "SWAP")?,
        }
        write!(f, "[")?;
        for (i, c) in self.controls.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        if !self.controls.is_empty() {
            write!(f, " -> ")?;
        }
        for (i, t) in self.targets.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, "]")
    }
}

/// Named qubit groups, laid out contiguously in this order: position
/// register, coin qubit, parallel-shift ancilla, decomposition ancilla block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RegisterLayout {
    position: usize,
    coin: bool,
    parallel_ancilla: bool,
    decomposition: usize,
}

impl RegisterLayout {
    /// `n` qubits with no special roles (all counted as "position").
    pub fn plain(n: usize) -> Self {
        RegisterLayout { position: n, coin: false, parallel_ancilla: false, decomposition: 0 }
    }

    /// Working register for a 2^m-site grid: m position qubits and a coin.
    pub fn working(m: usize) -> Self {
        RegisterLayout { position: m, coin: true, parallel_ancilla: false, decomposition: 0 }
    }

    pub fn with_parallel_ancilla(self) -> Self {
        RegisterLayout { parallel_ancilla: true, ..self }
    }

    pub fn with_decomposition_ancillas(self, count: usize) -> Self {
        RegisterLayout { decomposition: count, ..self }
    }

    pub fn position_count(&self) -> usize {
        self.position
    }

    pub fn position(&self, i: usize) -> QubitId {
        debug_assert!(i < self.position);
        QubitId(i)
    }

    pub fn position_qubits(&self) -> impl Iterator<Item = QubitId> {
        (0..self.position).map(QubitId)
    }

    pub fn coin(&self) -> Option<QubitId> {
        self.coin.then_some(QubitId(self.position))
    }

    pub fn parallel_ancilla(&self) -> Option<QubitId> {
        self.parallel_ancilla.then(|| QubitId(self.position + self.coin as usize))
    }

    fn decomposition_start(&self) -> usize {
        self.position + self.coin as usize + self.parallel_ancilla as usize
    }

    pub fn decomposition_count(&self) -> usize {
        self.decomposition
    }

    pub fn decomposition_ancillas(&self) -> impl Iterator<Item = QubitId> {
        let start = self.decomposition_start();
        (start..start + self.decomposition).map(QubitId)
    }

    pub fn is_decomposition_ancilla(&self, q: QubitId) -> bool {
        let start = self.decomposition_start();
        (start..start + self.decomposition).contains(&q.0)
    }

    /// Position qubits plus the coin, if any.
    pub fn working_count(&self) -> usize {
        self.position + self.coin as usize
    }

    /// Qubits expected to start and end in |0⟩.
    pub fn ancillas(&self) -> Vec<QubitId> {
        self.parallel_ancilla().into_iter().chain(self.decomposition_ancillas()).collect()
    }

    pub fn total_qubits(&self) -> usize {
        self.decomposition_start() + self.decomposition
    }
}

/// Ordered gate sequence over a register layout.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    layout: RegisterLayout,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(layout: RegisterLayout) -> Self {
        Circuit { layout, gates: Vec::new() }
    }

    pub fn from_gates(layout: RegisterLayout, gates: impl IntoIterator<Item = Gate>) -> Result<Self> {
        let mut circuit = Circuit::new(layout);
        circuit.extend(gates)?;
        Ok(circuit)
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn into_gates(self) -> Vec<Gate> {
        self.gates
    }

    pub fn qubit_count(&self) -> usize {
        self.layout.total_qubits()
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.qubit_count())?;
        self.gates.push(gate);
        Ok(())
    }

    /// Consuming form of [`Circuit::push`].
    pub fn append(mut self, gate: Gate) -> Result<Self> {
        self.push(gate)?;
        Ok(self)
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> Result<()> {
        for gate in gates {
            self.push(gate)?;
        }
        Ok(())
    }

    /// `self` followed by `other`. Both must span the same number of qubits;
    /// the result keeps `self`'s layout.
    pub fn compose(&self, other: &Circuit) -> Result<Circuit> {
        if self.qubit_count() != other.qubit_count() {
            return Err(Error::DimensionMismatch {
                expected: self.qubit_count(),
                found: other.qubit_count(),
            });
        }
        let mut gates = self.gates.clone();
        gates.extend_from_slice(&other.gates);
        Ok(Circuit { layout: self.layout, gates })
    }

    pub fn inverse(&self) -> Circuit {
        Circuit { layout: self.layout, gates: self.gates.iter().rev().map(Gate::inverse).collect() }
    }

    /// The same gates on a layout with at least as many qubits. Qubit
    /// indices are kept, so the extra qubits idle.
    pub fn widen(&self, layout: RegisterLayout) -> Result<Circuit> {
        if layout.total_qubits() < self.qubit_count() {
            return Err(Error::DimensionMismatch {
                expected: self.qubit_count(),
                found: layout.total_qubits(),
            });
        }
        Ok(Circuit { layout, gates: self.gates.clone() })
    }

    /// Replaces the gate list wholesale; used by passes that rebuild it.
    pub(crate) fn with_gates(layout: RegisterLayout, gates: Vec<Gate>) -> Circuit {
        Circuit { layout, gates }
    }

    pub fn census(&self) -> GateCensus {
        let mut census = GateCensus::default();
        for gate in &self.gates {
            *census.counts.entry((gate.kind.tag(), gate.controls.len())).or_default() += 1;
        }
        census
    }
}

/// Per-kind, per-control-arity gate tally.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GateCensus {
    counts: BTreeMap<(GateTag, usize), usize>,
}

impl GateCensus {
    pub fn counts(&self) -> &BTreeMap<(GateTag, usize), usize> {
        &self.counts
    }

    pub fn get(&self, tag: GateTag, controls: usize) -> usize {
        self.counts.get(&(tag, controls)).copied().unwrap_or(0)
    }

    /// Number of `C^kX` gates (k = 0 is a bare X).
    pub fn mcx(&self, k: usize) -> usize {
        self.get(GateTag::X, k)
    }

    pub fn toffoli(&self) -> usize {
        self.mcx(2)
    }

    pub fn cx_total(&self) -> usize {
        self.mcx(1)
    }

    pub fn two_qubit_total(&self) -> usize {
        self.cx_total() + self.get(GateTag::CPhase, 1) + self.get(GateTag::Swap, 0)
    }

    /// Largest control count among X-family gates.
    pub fn max_mcx_arity(&self) -> usize {
        self.counts
            .iter()
            .filter(|((tag, _), &n)| *tag == GateTag::X && n > 0)
            .map(|((_, k), _)| *k)
            .max()
            .unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.total() == 0
    }
}

impl AddAssign<&GateCensus> for GateCensus {
    fn add_assign(&mut self, rhs: &GateCensus) {
        for (key, n) in &rhs.counts {
            *self.counts.entry(*key).or_default() += n;
        }
    }
}

impl Add for &GateCensus {
    type Output = GateCensus;

    fn add(self, rhs: &GateCensus) -> GateCensus {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl fmt::Display for GateCensus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ((tag, k), n) in &self.counts {
            let label = match (tag, k) {
                (GateTag::X, 0) => "x".to_string(),
                (GateTag::X, 1) => "cx".to_string(),
                (GateTag::X, 2) => "ccx".to_string(),
                (GateTag::X, k) => format!("c{k}x"),
                (GateTag::CPhase, _) => "cp".to_string(),
                (tag, _) => tag.to_string(),
            };
            writeln!(f, "{label:<8}{n:>8}")?;
        }
        writeln!(f, "{:<8}{:>8}", "#cx", self.cx_total())?;
        write!(f, "{:<8}{:>8}", "#2q", self.two_qubit_total())
    }
}
