//! OpenQASM 3.0 text export and import.
//!
//! The emitted subset uses `stdgates.inc` gates (`x h rz p sx sxdg cx ccx cp
//! swap`) plus the `ctrl @` / `negctrl @` modifiers for X gates with more
//! than two controls or with open controls. Registers carry the layout:
//!
//! ```text
//! OPENQASM 3.0;
//! include "stdgates.inc";
//! qubit[4] pos;    // or `q` for a plain register
//! qubit[1] coin;
//! qubit[1] anc;
//! qubit[2] dec;
//! ```
//!
//! Empty registers are omitted. Output is byte-stable: angles are printed
//! with Rust's shortest round-trip float formatting.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::circuit::{Circuit, Control, Gate, GateKind, Polarity, QubitId, RegisterLayout};
use crate::error::{Error, Result};

/// How open controls appear in exported text.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum NegativeControlStyle {
    /// `negctrl @` modifier; import restores the original gate.
    #[default]
    Modifier,
    /// `x` on the control before and after a positive-control gate.
    XConjugate,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ExportOptions {
    pub negative_controls: NegativeControlStyle,
}

struct Registers {
    plain: bool,
    layout: RegisterLayout,
}

impl Registers {
    fn name(&self, q: QubitId) -> String {
        let l = &self.layout;
        let i = q.index();
        if i < l.position_count() {
            let reg = if self.plain { "q" } else { "pos" };
            return format!("{reg}[{i}]");
        }
        if Some(q) == l.coin() {
            return "coin[0]".into();
        }
        if Some(q) == l.parallel_ancilla() {
            return "anc[0]".into();
        }
        let start = l.decomposition_ancillas().next().map_or(0, |a| a.index());
        format!("dec[{}]", i - start)
    }
}

pub fn export_text(circuit: &Circuit) -> Result<String> {
    export_text_with(circuit, ExportOptions::default())
}

pub fn export_text_with(circuit: &Circuit, options: ExportOptions) -> Result<String> {
    let layout = *circuit.layout();
    let regs = Registers { plain: layout.coin().is_none(), layout };
    let mut out = String::from("OPENQASM 3.0;\ninclude \"stdgates.inc\";\n");
    let decls = [
        (if regs.plain { "q" } else { "pos" }, layout.position_count()),
        ("coin", layout.coin().is_some() as usize),
        ("anc", layout.parallel_ancilla().is_some() as usize),
        ("dec", layout.decomposition_count()),
    ];
    for (name, size) in decls {
        if size > 0 {
            writeln!(out, "qubit[{size}] {name};").unwrap();
        }
    }
    for gate in circuit.gates() {
        let flips: Vec<QubitId> = match options.negative_controls {
            NegativeControlStyle::XConjugate => {
                gate.controls().iter().filter(|c| c.is_negative()).map(|c| c.qubit).collect()
            }
            NegativeControlStyle::Modifier => Vec::new(),
        };
        let gate = if flips.is_empty() { gate.clone() } else { gate.with_positive_controls() };
        for &q in &flips {
            writeln!(out, "x {};", regs.name(q)).unwrap();
        }
        writeln!(out, "{};", statement(&gate, &regs)).unwrap();
        for &q in &flips {
            writeln!(out, "x {};", regs.name(q)).unwrap();
        }
    }
    Ok(out)
}

fn statement(gate: &Gate, regs: &Registers) -> String {
    let mut operands: Vec<String> = gate.controls().iter().map(|c| regs.name(c.qubit)).collect();
    operands.extend(gate.targets().iter().map(|&t| regs.name(t)));
    let all_positive = !gate.has_negative_controls();
    let head = match gate.kind() {
        GateKind::X => match gate.control_count() {
            0 => "x".to_string(),
            1 if all_positive => "cx".to_string(),
            2 if all_positive => "ccx".to_string(),
            _ => format!("{}x", modifiers(gate.controls())),
        },
        GateKind::H => "h".into(),
        GateKind::Rz(a) => format!("rz({a:?})"),
        GateKind::Phase(a) => format!("p({a:?})"),
        GateKind::Sx => "sx".into(),
        GateKind::Sxdg => "sxdg".into(),
        GateKind::CPhase(a) if all_positive => format!("cp({a:?})"),
        GateKind::CPhase(a) => format!("{}p({a:?})", modifiers(gate.controls())),
        GateKind::Swap => "swap".into(),
    };
    format!("{head} {}", operands.join(", "))
}

fn modifiers(controls: &[Control]) -> String {
    controls
        .iter()
        .map(|c| match c.polarity {
            Polarity::Positive => "ctrl @ ",
            Polarity::Negative => "negctrl @ ",
        })
        .collect()
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Parses the subset written by [`export_text`].
pub fn import_text(text: &str) -> Result<Circuit> {
    let mut sizes: Vec<(String, usize)> = Vec::new();
    let mut pending: Vec<(usize, String)> = Vec::new();
    let mut saw_header = false;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split("//").next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let stmt = body.strip_suffix(';').ok_or_else(|| parse_err(line, "missing `;`"))?.trim();
        if let Some(version) = stmt.strip_prefix("OPENQASM") {
            if version.trim() != "3.0" && version.trim() != "3" {
                return Err(parse_err(line, format!("unsupported version `{}`", version.trim())));
            }
            saw_header = true;
        } else if stmt.starts_with("include") {
            continue;
        } else if let Some(decl) = stmt.strip_prefix("qubit") {
            let (size, name) = parse_decl(decl).ok_or_else(|| parse_err(line, "bad qubit declaration"))?;
            if !pending.is_empty() {
                return Err(parse_err(line, "declaration after first gate"));
            }
            sizes.push((name, size));
        } else {
            pending.push((line, stmt.to_string()));
        }
    }
    if !saw_header {
        return Err(parse_err(1, "missing `OPENQASM 3.0;` header"));
    }

    let layout = layout_from_registers(&sizes)?;
    let mut offsets = Vec::new();
    let mut next = 0;
    for (name, size) in &sizes {
        offsets.push((name.clone(), next, *size));
        next += size;
    }
    let resolve = |operand: &str, line: usize| -> Result<QubitId> {
        let (name, rest) = operand.split_once('[').ok_or_else(|| parse_err(line, format!("bad operand `{operand}`")))?;
        let idx: usize = rest
            .strip_suffix(']')
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| parse_err(line, format!("bad operand `{operand}`")))?;
        let (_, start, size) = offsets
            .iter()
            .find(|(n, _, _)| n == name.trim())
            .ok_or_else(|| parse_err(line, format!("unknown register `{name}`")))?;
        if idx >= *size {
            return Err(parse_err(line, format!("index {idx} out of range for `{name}`")));
        }
        Ok(QubitId(start + idx))
    };

    let mut circuit = Circuit::new(layout);
    for (line, stmt) in pending {
        let gate = parse_gate(&stmt, line, &resolve)?;
        circuit.push(gate).map_err(|e| parse_err(line, e.to_string()))?;
    }
    Ok(circuit)
}

fn parse_decl(decl: &str) -> Option<(usize, String)> {
    let decl = decl.trim();
    if let Some(rest) = decl.strip_prefix('[') {
        let (size, name) = rest.split_once(']')?;
        Some((size.trim().parse().ok()?, name.trim().to_string()))
    } else {
        Some((1, decl.to_string()))
    }
}

fn layout_from_registers(sizes: &[(String, usize)]) -> Result<RegisterLayout> {
    let names: Vec<&str> = sizes.iter().map(|(n, _)| n.as_str()).collect();
    let size = |name: &str| sizes.iter().find(|(n, _)| n == name).map_or(0, |(_, s)| *s);
    let expected: Vec<&str> = if names.first() == Some(&"q") {
        vec!["q", "coin", "anc", "dec"]
    } else {
        vec!["pos", "coin", "anc", "dec"]
    };
    // Registers must appear in layout order, each at most once.
    let mut cursor = 0;
    for n in &names {
        match expected[cursor..].iter().position(|e| e == n) {
            Some(p) => cursor += p + 1,
            None => return Err(parse_err(1, format!("unexpected register `{n}`"))),
        }
    }
    if size("coin") > 1 || size("anc") > 1 {
        return Err(parse_err(1, "coin and anc registers hold one qubit"));
    }
    let position = size("pos") + size("q");
    let mut layout = if size("coin") == 1 { RegisterLayout::working(position) } else { RegisterLayout::plain(position) };
    if size("anc") == 1 {
        layout = layout.with_parallel_ancilla();
    }
    if size("coin") == 0 && size("anc") == 1 {
        return Err(parse_err(1, "anc register requires a coin register"));
    }
    Ok(layout.with_decomposition_ancillas(size("dec")))
}

fn parse_angle(text: &str, line: usize) -> Result<f64> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let value = if let Ok(v) = t.parse::<f64>() {
        Some(v)
    } else {
        // Forms: [-]pi, [-]pi/d, [-]a*pi, [-]a*pi/d
        let (sign, t) = match t.strip_prefix('-') {
            Some(rest) => (-1.0, rest),
            None => (1.0, t.as_str()),
        };
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n, d.parse::<f64>().ok()),
            None => (t, Some(1.0)),
        };
        let coeff = match num.strip_suffix("pi") {
            Some("") => Some(1.0),
            Some(c) => c.strip_suffix('*').and_then(|c| c.parse::<f64>().ok()),
            None => None,
        };
        coeff.zip(den).map(|(c, d)| sign * c * PI / d)
    };
    value.filter(|v| v.is_finite()).ok_or_else(|| parse_err(line, format!("bad angle `{text}`")))
}

fn parse_gate(stmt: &str, line: usize, resolve: &dyn Fn(&str, usize) -> Result<QubitId>) -> Result<Gate> {
    let mut rest = stmt.trim();
    let mut polarities = Vec::new();
    loop {
        if let Some(r) = rest.strip_prefix("negctrl") {
            polarities.push(Polarity::Negative);
            rest = r.trim_start().strip_prefix('@').ok_or_else(|| parse_err(line, "expected `@`"))?.trim_start();
        } else if let Some(r) = rest.strip_prefix("ctrl") {
            polarities.push(Polarity::Positive);
            rest = r.trim_start().strip_prefix('@').ok_or_else(|| parse_err(line, "expected `@`"))?.trim_start();
        } else {
            break;
        }
    }

    let (head, operands) = match rest.find('(') {
        Some(p) if rest[..p].chars().all(|c| c.is_ascii_alphanumeric()) => {
            let close = rest.find(')').ok_or_else(|| parse_err(line, "unclosed `(`"))?;
            (&rest[..=close], &rest[close + 1..])
        }
        _ => rest.split_once(char::is_whitespace).ok_or_else(|| parse_err(line, "missing operands"))?,
    };
    let (name, angle) = match head.split_once('(') {
        Some((n, a)) => (n, Some(parse_angle(a.trim_end_matches(')'), line)?)),
        None => (head, None),
    };
    let qubits = operands
        .split(',')
        .map(|o| resolve(o.trim(), line))
        .collect::<Result<Vec<_>>>()?;

    let (builtin_controls, kind, targets) = match (name, angle) {
        ("x", None) => (0, GateKind::X, 1),
        ("cx", None) => (1, GateKind::X, 1),
        ("ccx", None) => (2, GateKind::X, 1),
        ("h", None) => (0, GateKind::H, 1),
        ("sx", None) => (0, GateKind::Sx, 1),
        ("sxdg", None) => (0, GateKind::Sxdg, 1),
        ("swap", None) => (0, GateKind::Swap, 2),
        ("rz", Some(a)) => (0, GateKind::Rz(a), 1),
        ("p", Some(a)) if polarities.is_empty() => (0, GateKind::Phase(a), 1),
        ("p", Some(a)) => (0, GateKind::CPhase(a), 1),
        ("cp", Some(a)) => (1, GateKind::CPhase(a), 1),
        _ => return Err(parse_err(line, format!("unsupported gate `{head}`"))),
    };
    polarities.extend(std::iter::repeat_n(Polarity::Positive, builtin_controls));
    if qubits.len() != polarities.len() + targets {
        return Err(parse_err(line, format!("`{stmt}` has {} operands", qubits.len())));
    }
    let controls = qubits
        .iter()
        .zip(&polarities)
        .map(|(&qubit, &polarity)| Control { qubit, polarity })
        .collect();
    Gate::new(kind, qubits[polarities.len()..].to_vec(), controls).map_err(|e| parse_err(line, e.to_string()))
}
