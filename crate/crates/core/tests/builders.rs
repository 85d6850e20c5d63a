use qshift::builders::{expected_shift, parallel_sections};
use qshift::sim::basis_permutation;
use qshift::*;

fn table(variant: ShiftVariant, m: usize) -> PermutationTable {
    let c = build_shift(variant, m).unwrap();
    let ancillas = c.layout().ancillas();
    if variant.is_x_family() {
        extract_permutation(&c, &ancillas).unwrap()
    } else {
        basis_permutation(&c, &ancillas, 1e-10).unwrap()
    }
}

#[test]
fn variants_agree_for_m_4_to_8() {
    for m in 4..=8 {
        let canonical = table(ShiftVariant::Canonical, m);
        assert_eq!(table(ShiftVariant::Parallel, m).mapping(), canonical.mapping(), "m={m}");
        assert_eq!(table(ShiftVariant::Qft, m).mapping(), canonical.mapping(), "m={m}");
        assert!(canonical.mismatches(|i| expected_shift(m, i)).is_empty());
    }
}

#[test]
fn decomposition_splits_parity_into_ancilla() {
    // After D the ancilla holds q0 xor coin; position and coin are untouched.
    let sections = parallel_sections(5).unwrap();
    let d = Circuit::from_gates(sections.layout, sections.decompose.clone()).unwrap();
    let t = extract_permutation(&d, &[]).unwrap();
    let (coin, anc) = (5, 6);
    for i in 0..1usize << 6 {
        let parity = (i & 1) ^ (i >> coin & 1);
        assert_eq!(t.get(i), Some(i | parity << anc));
    }
}

#[test]
fn parallel_gate_budget() {
    // Constant part: 5 CX (4 of them in D and its inverse), 4 Toffoli, 3 C3X; variable part adds 2(n-2) CX and one C^kX for k = 4..n-2.
    for m in 5..=10 {
        let n = m + 1;
        let s = parallel_sections(m).unwrap();
        let var = Circuit::from_gates(s.layout, s.variable.clone()).unwrap().census();
        assert_eq!(var.cx_total(), 2 * (n - 2), "m={m}");
        for k in 4..=n - 2 {
            assert_eq!(var.mcx(k), 1);
        }
        let r = Circuit::from_gates(s.layout, s.rearrange.clone()).unwrap().census();
        assert_eq!((r.cx_total(), r.toffoli(), r.mcx(3)), (1, 4, 3));
    }
}

#[test]
fn lowered_width_is_two_m() {
    for m in 4..=10 {
        let out = run_pipeline(&build_parallel(m).unwrap(), &PassPipeline::reference()).unwrap();
        assert_eq!(out.circuit.qubit_count(), 2 * m, "m={m}");
    }
}
