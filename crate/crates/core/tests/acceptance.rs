//! Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero if any
//! criterion fails.
//!
//! Expectations here are recomputed independently of the library helpers
//! (`expected_shift`, `verify_shift`) wherever the library also has one.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use qshift::analysis::{predict_cx, predict_cx_presimplify};
use qshift::builders::parallel_sections;
use qshift::passes::{cancel_adjacent, lower_mcx_with};
use qshift::sim::{basis_permutation, unitary_equal_on};
use qshift::walk::{classical_walk_oracle, run_walk, WalkConfig};
use qshift::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: qshift::Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Independent statement of the shift on the working register: position in
/// the low `m` bits, coin above it.
fn shifted(m: usize, index: usize) -> usize {
    let size = 1 << m;
    let (k, coin) = (index % size, index / size);
    let k2 = if coin == 0 { (k + 1) % size } else { (k + size - 1) % size };
    coin * size + k2
}

fn check_shift_table(table: &PermutationTable, m: usize) -> std::result::Result<(), String> {
    ensure(table.len() == 2 << m, || format!("table has {} entries", table.len()))?;
    for i in 0..table.len() {
        let found = table.get(i);
        ensure(found == Some(shifted(m, i)), || format!("m={m}: basis {i} -> {found:?}, expected {}", shifted(m, i)))?;
    }
    Ok(())
}

fn semantic_correctness() -> Outcome {
    let mut checked = 0;
    for m in 4..=7 {
        for variant in ShiftVariant::ALL {
            let c = lib(build_shift(variant, m))?;
            let ancillas = c.layout().ancillas();
            let table = if variant.is_x_family() {
                lib(extract_permutation(&c, &ancillas))?
            } else {
                lib(basis_permutation(&c, &ancillas, 1e-10))?
            };
            check_shift_table(&table, m).map_err(|e| format!("{variant}: {e}"))?;
            checked += table.len();
        }
    }
    Ok(format!("{checked} basis states over m=4..7, 3 variants"))
}

fn random_circuit(rng: &mut ChaCha8Rng) -> Circuit {
    let n = rng.gen_range(6..=8);
    let mut c = Circuit::new(RegisterLayout::plain(n));
    let len = rng.gen_range(15..=40);
    while c.len() < len {
        let mut qubits: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            qubits.swap(i, rng.gen_range(0..=i));
        }
        let control = |q: usize, neg: bool| if neg { Control::neg(q) } else { Control::pos(q) };
        let theta = rng.gen_range(-3.0..3.0);
        let gate = match rng.gen_range(0..9) {
            0..=2 => {
                let k = rng.gen_range(0..=4);
                Gate::mcx(qubits[0], (1..=k).map(|i| control(qubits[i], rng.gen_bool(0.3))))
            }
            3 => Gate::h(qubits[0]),
            4 => Gate::rz(qubits[0], theta),
            5 => Gate::phase(qubits[0], theta),
            6 => Gate::cphase(control(qubits[1], rng.gen_bool(0.3)), qubits[0], theta),
            7 => if rng.gen_bool(0.5) { Gate::sx(qubits[0]) } else { Gate::sxdg(qubits[0]) },
            _ => Gate::swap(qubits[0], qubits[1]),
        };
        c.push(gate).expect("random gate fits");
    }
    c
}

fn pass_soundness() -> Outcome {
    let pipeline = PassPipeline::reference();
    for m in 4..=7 {
        let lowered = lib(run_pipeline(&lib(build_parallel(m))?, &pipeline))?.circuit;
        ensure(lowered.census().max_mcx_arity() <= 1, || format!("m={m}: multi-controlled gates survive"))?;
        let table = lib(basis_permutation(&lowered, &lowered.layout().ancillas(), 1e-9))?;
        check_shift_table(&table, m).map_err(|e| format!("lowered parallel {e}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst: f64 = 0.0;
    for case in 0..100 {
        let original = random_circuit(&mut rng);
        let lowered = lib(run_pipeline(&original, &pipeline))?.circuit;
        let wide = lib(original.widen(*lowered.layout()))?;
        let fixed: Vec<QubitId> = (original.qubit_count()..lowered.qubit_count()).map(QubitId).collect();
        let cmp = lib(unitary_equal_on(&wide, &lowered, &fixed, 1e-12))?;
        worst = worst.max(cmp.max_deviation);
        ensure(cmp.equal, || format!("random case {case}: deviation {:.2e}", cmp.max_deviation))?;
    }
    Ok(format!("parallel m=4..7 exact; 100 random circuits, max deviation {worst:.1e}"))
}

fn decomposition_counts() -> Outcome {
    for k in 3..=8 {
        let controls: Vec<Control> = (0..k).map(Control::pos).collect();
        let original = lib(Circuit::from_gates(RegisterLayout::plain(k + 1), [Gate::mcx(k, controls)]))?;
        let lowered = lib(lower_mcx_with(&original, true))?;
        let census = lowered.census();
        ensure(census.toffoli() == 2 * (k - 1) && census.cx_total() == 1 && census.total() == 2 * k - 1, || {
            format!("k={k}: census\n{census}")
        })?;
        let extra = lowered.qubit_count() - original.qubit_count();
        ensure(extra == k - 1, || format!("k={k}: {extra} ancillas"))?;
        // Target flips exactly when all controls are set; ancillas come back clean.
        let fixed: Vec<QubitId> = (k + 1..lowered.qubit_count()).map(QubitId).collect();
        let table = lib(extract_permutation(&lowered, &fixed))?;
        let all = (1 << k) - 1;
        for i in 0..table.len() {
            let want = if i & all == all { i ^ (1 << k) } else { i };
            ensure(table.get(i) == Some(want), || format!("k={k}: input {i} -> {:?}", table.get(i)))?;
        }
    }
    Ok("C^kX -> 2(k-1) Toffoli + 1 CX on k-1 ancillas, k=3..8".into())
}

fn toffoli_cancellation() -> Outcome {
    let mut details = Vec::new();
    for k in 4..=7 {
        let m = k + 2;
        let layout = RegisterLayout::working(m);
        let coin = layout.coin().unwrap();
        let pair = vec![
            Gate::mcx(k, (0..k).map(Control::pos)),
            Gate::mcx(k, [Control::neg(coin)]),
            Gate::mcx(k + 1, (0..=k).map(Control::pos)),
        ];
        let variable = lib(parallel_sections(m))?.variable;
        ensure(variable.windows(3).any(|w| w == pair.as_slice()), || {
            format!("k={k}: pattern not found in the parallel variable part")
        })?;
        let original = lib(Circuit::from_gates(layout, pair))?;
        let lowered = lib(lower_mcx_with(&original, true))?;
        let cancelled = lib(cancel_adjacent(&lowered))?;
        let before = lowered.census().toffoli();
        let after = cancelled.census().toffoli();
        ensure(before == 4 * k - 2 && before - after == 2 * (k - 1), || {
            format!("k={k}: Toffolis {before} -> {after}")
        })?;
        // Split at the central CX (the only CX touching the coin).
        let centre = cancelled
            .gates()
            .iter()
            .position(|g| g.controls().iter().any(|c| c.qubit == coin))
            .ok_or("central CX missing")?;
        let tail = &cancelled.gates()[centre + 1..];
        let tail_toffolis = tail.iter().filter(|g| g.is_toffoli()).count();
        let tail_cx = tail.iter().filter(|g| g.is_x_family() && g.control_count() == 1).count();
        let head_cx = cancelled.gates()[..centre].iter().filter(|g| g.is_x_family() && g.control_count() == 1).count();
        ensure(tail_toffolis == k + 1 && head_cx + tail_cx == 2 && cancelled.census().cx_total() == 3, || {
            format!("k={k}: after centre {tail_toffolis} Toffolis, {} CX outside centre", head_cx + tail_cx)
        })?;
        if k == 4 {
            ensure(cancelled.qubit_count() <= 12, || format!("{} qubits", cancelled.qubit_count()))?;
            let wide = lib(original.widen(*cancelled.layout()))?;
            let fixed = cancelled.layout().decomposition_ancillas().collect::<Vec<_>>();
            let cmp = lib(unitary_equal_on(&wide, &cancelled, &fixed, 1e-12))?;
            ensure(cmp.equal, || format!("k=4 unitary deviation {:.2e}", cmp.max_deviation))?;
        }
        details.push(format!("k={k}: {before}->{after}"));
    }
    Ok(format!("C^{{k+1}}X keeps k+1 Toffolis, 2 CX + centre; {}", details.join(", ")))
}

fn eq10_scaling() -> Outcome {
    let pipeline = PassPipeline::reference();
    let measure = |n: usize| -> std::result::Result<i64, String> {
        let run = lib(run_pipeline(&lib(build_parallel(n - 1))?, &pipeline))?;
        Ok(run.circuit.census().cx_total() as i64)
    };
    let measured: Vec<i64> = (7..=12).map(measure).collect::<std::result::Result<_, _>>()?;
    let diffs: Vec<i64> = measured.windows(2).map(|w| w[1] - w[0]).collect();
    ensure(diffs.iter().all(|&d| d == 15), || format!("differences {diffs:?}"))?;
    let offsets: Vec<i64> = (7..=12).zip(&measured).map(|(n, &v)| v - (15 * (n - 6) + 149)).collect();
    ensure(offsets.iter().all(|&o| o == offsets[0]), || format!("offsets {offsets:?}"))?;
    let at6 = measure(6)?;
    let eq9 = lib(predict_cx_presimplify(6))?;
    Ok(format!(
        "n=7..12 cx {measured:?}, differences 15, offset {:+}; n=6 measured {at6} (uncancelled closed form gives {eq9})",
        offsets[0]
    ))
}

fn formula_reproduction() -> Outcome {
    let table = [(10, 209, 162), (15, 284, 392), (20, 359, 722), (25, 434, 1152)];
    for (n, p, q) in table {
        let (gp, gq) = (lib(predict_cx(ShiftVariant::Parallel, n))?, lib(predict_cx(ShiftVariant::Qft, n))?);
        ensure(gp == p && gq == q, || format!("n={n}: parallel {gp}, qft {gq}"))?;
    }
    let c5 = lib(predict_cx(ShiftVariant::Canonical, 5))?;
    ensure(c5 == 119, || format!("canonical n=5: {c5}"))?;
    for n in 5..=30 {
        let q = |k| predict_cx(ShiftVariant::Qft, k).unwrap() as i64;
        let d2 = q(n + 2) - 2 * q(n + 1) + q(n);
        ensure(d2 == 4, || format!("qft second difference at {n}: {d2}"))?;
    }
    Ok("table values exact, canonical(5)=119, qft second difference 4".into())
}

fn walk_oracle() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut parity_checks = 0;
    for m in [4, 5] {
        for steps in [1, 8, 16] {
            let mut config = WalkConfig::new(m, steps, ShiftVariant::Parallel);
            config.initial_site = 3;
            let oracle = lib(classical_walk_oracle(&config))?;
            for variant in ShiftVariant::ALL {
                let walk = lib(run_walk(&WalkConfig { variant, ..config }))?;
                let dev = walk.distribution.max_deviation(&oracle);
                worst = worst.max(dev);
                ensure(dev <= 1e-9, || format!("m={m} T={steps} {variant}: deviation {dev:.2e}"))?;
                if (1 << m) > 2 * steps {
                    parity_checks += 1;
                    let wrong = walk
                        .distribution
                        .probabilities
                        .iter()
                        .enumerate()
                        .filter(|&(k, p)| (k + 3 + steps) % 2 == 1 && *p > 1e-12)
                        .count();
                    ensure(wrong == 0, || format!("m={m} T={steps} {variant}: {wrong} sites of wrong parity"))?;
                }
            }
        }
    }
    Ok(format!("max deviation {worst:.1e}; parity held in {parity_checks} runs"))
}

fn cli_determinism() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_qshift");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |args: &[&str], out: &Path| -> std::result::Result<Vec<u8>, String> {
        let status = Command::new(exe)
            .args(args)
            .arg("--out")
            .arg(out)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(status.status.success(), || format!("{args:?}: {}", String::from_utf8_lossy(&status.stderr)))?;
        std::fs::read(out).map_err(|e| e.to_string())
    };
    let commands: [&[&str]; 6] = [
        &["build", "--variant", "parallel", "-m", "6"],
        &["build", "--variant", "qft", "-m", "5"],
        &["lower", "--variant", "parallel", "-m", "6"],
        &["count", "--variant", "canonical", "-m", "5", "--reference", "--format", "csv"],
        &["table", "--n-min", "5", "--n-max", "12", "--format", "csv"],
        &["walk", "-m", "5", "--steps", "12", "--coin-state", "symmetric"],
    ];
    for args in commands {
        let a = run(args, &dir.path().join("a"))?;
        let b = run(args, &dir.path().join("b"))?;
        ensure(!a.is_empty() && a == b, || format!("{args:?}: outputs differ"))?;
    }
    Ok(format!("{} subcommand invocations byte-identical across runs", commands.len()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("semantic correctness", semantic_correctness, Duration::from_secs(60)),
        ("pass soundness", pass_soundness, Duration::from_secs(600)),
        ("decomposition counts", decomposition_counts, Duration::from_secs(600)),
        ("toffoli cancellation", toffoli_cancellation, Duration::from_secs(600)),
        ("cx scaling", eq10_scaling, Duration::from_secs(300)),
        ("formula reproduction", formula_reproduction, Duration::from_secs(600)),
        ("walk oracle", walk_oracle, Duration::from_secs(120)),
        ("cli determinism", cli_determinism, Duration::from_secs(600)),
    ];
    let mut failed = 0;
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let mut outcome = check();
        let elapsed = start.elapsed();
        if outcome.is_ok() && elapsed > budget {
            outcome = Err(format!("took {elapsed:.1?}, budget {budget:?}"));
        }
        match outcome {
            Ok(detail) => println!("PASS  {name:<22} {detail} ({elapsed:.2?})"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name:<22} {detail} ({elapsed:.2?})");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
