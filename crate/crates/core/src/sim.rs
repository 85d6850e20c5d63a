//! Dense statevector simulation and the permutation/unitary oracles built on it.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::circuit::{Circuit, Control, Gate, GateKind, Polarity, QubitId};
use crate::error::{Error, Result};

/// Hard cap on dense simulation width.
pub const MAX_QUBITS: usize = 24;

/// Widest circuit accepted by [`unitary_equal`].
pub const MAX_UNITARY_QUBITS: usize = 12;

/// Widest circuit accepted by [`extract_permutation`], whose classical
/// bit-level evaluation does not allocate amplitudes.
pub const MAX_PERMUTATION_QUBITS: usize = 40;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
    qubits: usize,
}

impl StateVector {
    /// |0…0⟩ on `qubits` qubits.
    pub fn zero(qubits: usize) -> Result<Self> {
        Self::basis(qubits, 0)
    }

    pub fn basis(qubits: usize, index: usize) -> Result<Self> {
        if qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits(qubits));
        }
        let dim = 1usize << qubits;
        if index >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for {qubits} qubits"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { amplitudes, qubits })
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = amplitudes.len();
        if !dim.is_power_of_two() {
            return Err(Error::InvalidArgument(format!("length {dim} is not a power of two")));
        }
        let qubits = dim.trailing_zeros() as usize;
        if qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits(qubits));
        }
        Ok(StateVector { amplitudes, qubits })
    }

    pub fn qubit_count(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amplitudes[index].norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Applies `gate` in place.
    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.qubits)?;
        let (mask, value) = control_mask(gate.controls());
        let t = gate.target().bit();
        match gate.kind() {
            GateKind::X => {
                for i in 0..self.amplitudes.len() {
                    if i & t == 0 && i & mask == value {
                        self.amplitudes.swap(i, i | t);
                    }
                }
            }
            GateKind::H => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                let r = Complex64::new(s, 0.0);
                self.apply_matrix(t, [[r, r], [r, -r]]);
            }
            GateKind::Rz(theta) => {
                let lo = Complex64::from_polar(1.0, -theta / 2.0);
                let hi = Complex64::from_polar(1.0, theta / 2.0);
                for (i, a) in self.amplitudes.iter_mut().enumerate() {
                    *a *= if i & t == 0 { lo } else { hi };
                }
            }
            GateKind::Phase(theta) | GateKind::CPhase(theta) => {
                let phase = Complex64::from_polar(1.0, theta);
                for (i, a) in self.amplitudes.iter_mut().enumerate() {
                    if i & t != 0 && i & mask == value {
                        *a *= phase;
                    }
                }
            }
            GateKind::Sx | GateKind::Sxdg => {
                let p = Complex64::new(0.5, 0.5);
                let m = Complex64::new(0.5, -0.5);
                let matrix = if gate.kind() == GateKind::Sx { [[p, m], [m, p]] } else { [[m, p], [p, m]] };
                self.apply_matrix(t, matrix);
            }
            GateKind::Swap => {
                let a = gate.targets()[0].bit();
                let b = gate.targets()[1].bit();
                for i in 0..self.amplitudes.len() {
                    if i & a != 0 && i & b == 0 {
                        self.amplitudes.swap(i, i ^ a ^ b);
                    }
                }
            }
        }
        Ok(())
    }

    fn apply_matrix(&mut self, t: usize, m: [[Complex64; 2]; 2]) {
        for i in 0..self.amplitudes.len() {
            if i & t == 0 {
                let a0 = self.amplitudes[i];
                let a1 = self.amplitudes[i | t];
                self.amplitudes[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amplitudes[i | t] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }
}

fn control_mask(controls: &[Control]) -> (usize, usize) {
    controls.iter().fold((0, 0), |(mask, value), c| {
        let bit = c.qubit.bit();
        let v = if c.polarity == Polarity::Positive { bit } else { 0 };
        (mask | bit, value | v)
    })
}

/// Runs every gate of `circuit` on `initial`, in order.
pub fn run(circuit: &Circuit, mut initial: StateVector) -> Result<StateVector> {
    if initial.qubit_count() != circuit.qubit_count() {
        return Err(Error::DimensionMismatch {
            expected: circuit.qubit_count(),
            found: initial.qubit_count(),
        });
    }
    for gate in circuit.gates() {
        initial.apply(gate)?;
    }
    Ok(initial)
}

/// Basis-to-basis map over the non-ancilla qubits of a circuit.
///
/// Table index `i` enumerates assignments of the free qubits: bit `j` of `i`
/// is the value of the `j`-th free qubit (in ascending qubit order). All
/// fixed ancillas are |0⟩ on input; an entry is `None` when the output is not
/// of the expected form (see the producing function).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationTable {
    free_qubits: Vec<QubitId>,
    mapping: Vec<Option<usize>>,
}

impl PermutationTable {
    pub fn free_qubits(&self) -> &[QubitId] {
        &self.free_qubits
    }

    pub fn mapping(&self) -> &[Option<usize>] {
        &self.mapping
    }

    pub fn get(&self, index: usize) -> Option<usize> {
        self.mapping[index]
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    pub fn all_valid(&self) -> bool {
        self.mapping.iter().all(Option::is_some)
    }

    /// True when every entry is valid and the map is a bijection.
    pub fn is_bijection(&self) -> bool {
        let mut hit = vec![false; self.mapping.len()];
        for entry in &self.mapping {
            match entry {
                Some(o) if *o < hit.len() && !hit[*o] => hit[*o] = true,
                _ => return false,
            }
        }
        true
    }

    /// Indices whose image differs from `expected(index)`.
    pub fn mismatches(&self, expected: impl Fn(usize) -> usize) -> Vec<usize> {
        (0..self.mapping.len()).filter(|&i| self.mapping[i] != Some(expected(i))).collect()
    }
}

/// Scatter/gather between table indices and full basis indices.
struct FreeIndexer {
    free: Vec<QubitId>,
    fixed_mask: usize,
}

impl FreeIndexer {
    fn new(qubits: usize, fixed: &[QubitId]) -> Result<Self> {
        let mut fixed_mask = 0usize;
        for q in fixed {
            if q.0 >= qubits {
                return Err(Error::QubitOutOfRange { qubit: *q, count: qubits });
            }
            fixed_mask |= q.bit();
        }
        let free = (0..qubits).map(QubitId).filter(|q| fixed_mask & q.bit() == 0).collect();
        Ok(FreeIndexer { free, fixed_mask })
    }

    fn size(&self) -> usize {
        1usize << self.free.len()
    }

    fn expand(&self, index: usize) -> usize {
        self.free
            .iter()
            .enumerate()
            .filter(|(j, _)| index >> j & 1 == 1)
            .fold(0, |acc, (_, q)| acc | q.bit())
    }

    fn compress(&self, full: usize) -> Option<usize> {
        if full & self.fixed_mask != 0 {
            return None;
        }
        Some(
            self.free
                .iter()
                .enumerate()
                .filter(|(_, q)| full & q.bit() != 0)
                .fold(0, |acc, (j, _)| acc | 1 << j),
        )
    }
}

/// Permutation realized by an X-family circuit, evaluated classically.
///
/// Every gate must be an X with any number of controls. An entry is invalid
/// when a fixed ancilla is left set.
pub fn extract_permutation(circuit: &Circuit, fixed_ancillas: &[QubitId]) -> Result<PermutationTable> {
    let qubits = circuit.qubit_count();
    if qubits > MAX_PERMUTATION_QUBITS {
        return Err(Error::TooManyQubits(qubits));
    }
    if let Some(g) = circuit.gates().iter().find(|g| !g.is_x_family()) {
        return Err(Error::NotPermutation(g.to_string()));
    }
    let ops: Vec<(usize, usize, usize)> = circuit
        .gates()
        .iter()
        .map(|g| {
            let (mask, value) = control_mask(g.controls());
            (mask, value, g.target().bit())
        })
        .collect();
    let indexer = FreeIndexer::new(qubits, fixed_ancillas)?;
    let mapping = (0..indexer.size())
        .into_par_iter()
        .map(|i| {
            let mut s = indexer.expand(i);
            for &(mask, value, t) in &ops {
                if s & mask == value {
                    s ^= t;
                }
            }
            indexer.compress(s)
        })
        .collect();
    Ok(PermutationTable { free_qubits: indexer.free, mapping })
}

/// Basis action of an arbitrary circuit, by statevector simulation.
///
/// An entry is valid when the output equals `g·|j⟩` within `tol` per
/// amplitude, with fixed ancillas clear in `j`, and `g` the same global phase
/// for every input (taken from input 0).
pub fn basis_permutation(circuit: &Circuit, fixed_ancillas: &[QubitId], tol: f64) -> Result<PermutationTable> {
    let qubits = circuit.qubit_count();
    if qubits > MAX_QUBITS {
        return Err(Error::TooManyQubits(qubits));
    }
    let indexer = FreeIndexer::new(qubits, fixed_ancillas)?;
    let outputs: Vec<Option<(usize, Complex64)>> = (0..indexer.size())
        .into_par_iter()
        .map(|i| -> Result<Option<(usize, Complex64)>> {
            let out = run(circuit, StateVector::basis(qubits, indexer.expand(i))?)?;
            let (best, amp) = out
                .amplitudes()
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
                .map(|(j, a)| (j, *a))
                .expect("non-empty state");
            let clean = (amp.norm() - 1.0).abs() <= tol
                && out.amplitudes().iter().enumerate().all(|(j, a)| j == best || a.norm() <= tol);
            Ok(if clean { indexer.compress(best).map(|j| (j, amp)) } else { None })
        })
        .collect::<Result<_>>()?;
    let reference = outputs.first().copied().flatten().map(|(_, a)| a);
    let mapping = outputs
        .into_iter()
        .map(|entry| match (entry, reference) {
            (Some((j, a)), Some(r)) if (a - r).norm() <= tol => Some(j),
            _ => None,
        })
        .collect();
    Ok(PermutationTable { free_qubits: indexer.free, mapping })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitaryComparison {
    pub equal: bool,
    /// Largest entrywise |ΔU| after global-phase alignment.
    pub max_deviation: f64,
}

/// Compares two circuit unitaries entrywise up to a global phase.
pub fn unitary_equal(c1: &Circuit, c2: &Circuit, tol: f64) -> Result<UnitaryComparison> {
    unitary_equal_on(c1, c2, &[], tol)
}

/// Like [`unitary_equal`], restricted to input columns where every qubit in
/// `fixed_ancillas` is |0⟩. Output columns are compared in full, so an
/// ancilla left dirty by one side shows up as a deviation.
pub fn unitary_equal_on(c1: &Circuit, c2: &Circuit, fixed_ancillas: &[QubitId], tol: f64) -> Result<UnitaryComparison> {
    let qubits = c1.qubit_count();
    if c2.qubit_count() != qubits {
        return Err(Error::DimensionMismatch { expected: qubits, found: c2.qubit_count() });
    }
    if qubits > MAX_UNITARY_QUBITS {
        return Err(Error::TooManyQubits(qubits));
    }
    let indexer = FreeIndexer::new(qubits, fixed_ancillas)?;
    let column = |i: usize| -> Result<(StateVector, StateVector)> {
        let input = StateVector::basis(qubits, indexer.expand(i))?;
        Ok((run(c1, input.clone())?, run(c2, input)?))
    };

    // Global phase from the first largest-magnitude entry of column 0.
    let (u1, u2) = column(0)?;
    let (idx, _) = u1
        .amplitudes()
        .iter()
        .enumerate()
        .fold((0, -1.0), |best, (j, a)| if a.norm() > best.1 { (j, a.norm()) } else { best });
    let ratio = u2.amplitude(idx) / u1.amplitude(idx);
    let phase = if ratio.norm() > 0.0 { ratio / ratio.norm() } else { Complex64::new(1.0, 0.0) };

    let deviation = |a: &StateVector, b: &StateVector| {
        a.amplitudes()
            .iter()
            .zip(b.amplitudes())
            .map(|(x, y)| (x * phase - y).norm())
            .fold(0.0, f64::max)
    };
    let first = deviation(&u1, &u2);
    let rest = (1..indexer.size())
        .into_par_iter()
        .map(|i| column(i).map(|(a, b)| deviation(&a, &b)))
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))?;
    let max_deviation = first.max(rest);
    Ok(UnitaryComparison { equal: max_deviation <= tol, max_deviation })
}
