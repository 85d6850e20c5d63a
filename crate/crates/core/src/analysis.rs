//! Closed-form CX predictors and predicted-versus-measured scaling tables.
//!
//! Sizes here are working-register sizes `n = m + 1` (position qubits plus
//! the coin), the unit the predictors are stated in.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::builders::{build_shift, ShiftVariant};
use crate::error::{Error, Result};
use crate::passes::{run_pipeline, PassPipeline};

/// Smallest working size each predictor is defined for.
pub fn predictor_floor(variant: ShiftVariant) -> usize {
    match variant {
        ShiftVariant::Canonical | ShiftVariant::Qft => 5,
        ShiftVariant::Parallel => 6,
    }
}

/// Fitted CX counts: canonical `52n - 141`, parallel `15(n-6) + 149`,
/// QFT `2n^2 - 4n + 2`.
pub fn predict_cx(variant: ShiftVariant, n: usize) -> Result<u64> {
    let min = predictor_floor(variant);
    if n < min {
        return Err(Error::FormulaDomain { n, min });
    }
    let n = n as u64;
    Ok(match variant {
        ShiftVariant::Canonical => 52 * n - 141,
        ShiftVariant::Parallel => 15 * (n - 6) + 149,
        ShiftVariant::Qft => 2 * n * n - 4 * n + 2,
    })
}

/// Parallel shift with every MCX lowered separately and nothing cancelled:
/// `96 + 3n + sum_{k=4}^{n-2} 12(k-1)`, evaluated as written.
pub fn predict_cx_presimplify(n: usize) -> Result<u64> {
    if n < 6 {
        return Err(Error::FormulaDomain { n, min: 6 });
    }
    let tail: u64 = (4..=n as u64 - 2).map(|k| 12 * (k - 1)).sum();
    Ok(96 + 3 * n as u64 + tail)
}

/// Parallel shift CX count with a per-arity cost `d(k)` for each `C^kX`:
/// `1 + 2n + 4 d(2) + 3 d(3) + sum_{k=4}^{n-2} d(k)`.
pub fn predict_cx_general(n: usize, d: impl Fn(usize) -> u64) -> Result<u64> {
    if n < 5 {
        return Err(Error::FormulaDomain { n, min: 5 });
    }
    let tail: u64 = (4..=n.saturating_sub(2)).map(&d).sum();
    Ok(1 + 2 * n as u64 + 4 * d(2) + 3 * d(3) + tail)
}

/// Ancilla-free lower bound `2(k+1)` per `C^kX`.
pub fn lower_bound_cost(k: usize) -> u64 {
    2 * (k as u64 + 1)
}

/// Ancilla ladder cost: `2(k-1)` six-CX Toffolis plus one CX, or six for a
/// bare Toffoli.
pub fn ancilla_ladder_cost(k: usize) -> u64 {
    match k {
        0 => 0,
        1 => 1,
        2 => 6,
        _ => 12 * (k as u64 - 1) + 1,
    }
}

/// Smallest `n` at which the parallel prediction drops below the QFT one.
pub fn crossover_point() -> usize {
    (predictor_floor(ShiftVariant::Parallel)..)
        .find(|&n| {
            let parallel = predict_cx(ShiftVariant::Parallel, n).unwrap();
            let qft = predict_cx(ShiftVariant::Qft, n).unwrap();
            parallel < qft
        })
        .expect("quadratic term dominates eventually")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScalingRow {
    pub n: usize,
    pub variant: ShiftVariant,
    pub predicted_cx: Option<u64>,
    pub measured_cx: Option<u64>,
}

impl ScalingRow {
    pub fn delta(&self) -> Option<i64> {
        Some(self.measured_cx? as i64 - self.predicted_cx? as i64)
    }
}

/// Inclusive range of working sizes with a stride.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SizeRange {
    pub min: usize,
    pub max: usize,
    pub step: usize,
}

impl SizeRange {
    pub fn new(min: usize, max: usize, step: usize) -> Result<Self> {
        if min < 2 || max < min || step == 0 {
            return Err(Error::InvalidArgument(format!("bad size range {min}..={max} step {step}")));
        }
        Ok(SizeRange { min, max, step })
    }

    pub fn sizes(&self) -> impl Iterator<Item = usize> {
        (self.min..=self.max).step_by(self.step)
    }
}

/// Largest working size the table will build and lower. Lowering a size-n
/// shift is cheap, so this only guards against absurd requests.
pub const MAX_MEASURED_N: usize = 64;

/// One row per size per variant, measured through `pipeline`. Cells outside
/// a formula's domain or a builder's domain are `None`.
pub fn scaling_table(range: SizeRange, variants: &[ShiftVariant], pipeline: &PassPipeline) -> Result<Vec<ScalingRow>> {
    let cells: Vec<(usize, ShiftVariant)> =
        range.sizes().flat_map(|n| variants.iter().map(move |&v| (n, v))).collect();
    cells
        .into_par_iter()
        .map(|(n, variant)| {
            let m = n - 1;
            let measured_cx = if m >= variant.min_position_qubits() && n <= MAX_MEASURED_N {
                let run = run_pipeline(&build_shift(variant, m)?, pipeline)?;
                Some(run.circuit.census().cx_total() as u64)
            } else {
                None
            };
            Ok(ScalingRow { n, variant, predicted_cx: predict_cx(variant, n).ok(), measured_cx })
        })
        .collect()
}

pub const TABLE_COLUMNS: [&str; 5] = ["n", "variant", "predicted_cx", "measured_cx", "delta"];

const NA: &str = "NA";

fn cells(row: &ScalingRow) -> [String; 5] {
    let opt = |v: Option<String>| v.unwrap_or_else(|| NA.to_string());
    [
        row.n.to_string(),
        row.variant.name().to_string(),
        opt(row.predicted_cx.map(|v| v.to_string())),
        opt(row.measured_cx.map(|v| v.to_string())),
        opt(row.delta().map(|d| format!("{d:+}"))),
    ]
}

/// Comma-separated, header line first, `NA` for missing cells.
pub fn format_csv(rows: &[ScalingRow]) -> String {
    let mut out = TABLE_COLUMNS.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&cells(row).join(","));
        out.push('\n');
    }
    out
}

/// Right-aligned columns separated by two spaces.
pub fn format_aligned(rows: &[ScalingRow]) -> String {
    let body: Vec<[String; 5]> = rows.iter().map(cells).collect();
    let mut widths = TABLE_COLUMNS.map(str::len);
    for r in &body {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let header = TABLE_COLUMNS.map(String::from);
    for r in std::iter::once(&header).chain(&body) {
        let line: Vec<String> = r.iter().zip(widths).map(|(c, w)| format!("{c:>w$}")).collect();
        writeln!(out, "{}", line.join("  ")).unwrap();
    }
    out
}
