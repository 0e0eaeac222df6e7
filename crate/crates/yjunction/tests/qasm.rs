mod common;

use common::{branch_distance, branch_infidelity, random_circuit, random_input};
use yjunction::qasm::{emit, is_lowered, lower, parse, parse_with, ParseOptions};
use yjunction_core::circuit::{gate_circuit, init_circuit, Circuit};
use yjunction_core::encoding::{EncodingId, LogicalEncoding};
use yjunction_core::protocol::GateId;
use yjunction_core::statevector::StateVector;
use yjunction_core::tomography::process_inputs;

fn built_in() -> Vec<(String, Circuit)> {
    let mut out = Vec::new();
    for id in [EncodingId::Y1, EncodingId::Y2] {
        for labels in process_inputs(id.logical_qubits()) {
            out.push((format!("init {id} {labels:?}"), init_circuit(id, &labels).unwrap()));
        }
    }
    for g in GateId::ALL {
        let k = LogicalEncoding::new(g.encoding()).logical_qubits();
        for labels in process_inputs(k) {
            out.push((format!("{g} {labels:?}"), gate_circuit(g, &labels).unwrap()));
        }
    }
    out
}

#[test]
fn random_circuits_round_trip() {
    for seed in 0..1000 {
        let c = random_circuit(seed);
        let text = emit(&c);
        let back = parse(&text).unwrap_or_else(|e| panic!("seed {seed}: {e}\n{text}"));
        assert_eq!(back, c, "seed {seed}");
        assert_eq!(emit(&back), text);
        let input = random_input(c.n_qubits, seed);
        assert_eq!(branch_distance(&c, &back, &input), Some(0.0), "seed {seed}");
    }
}

#[test]
fn built_in_circuits_round_trip() {
    for (name, c) in built_in() {
        let back = parse(&emit(&c)).unwrap();
        assert_eq!(back, c, "{name}");
        let zero = StateVector::zero(c.n_qubits).unwrap();
        let d = branch_distance(&c, &back, &zero).expect("same branches");
        assert!(d < 1e-12, "{name}: {d}");
    }
}

#[test]
fn lowering_preserves_every_branch() {
    for seed in 0..300 {
        let c = random_circuit(seed);
        let l = lower(&c);
        assert!(is_lowered(&l), "seed {seed}");
        let input = random_input(c.n_qubits, seed);
        let d = branch_infidelity(&c, &l, &input).expect("same branches");
        assert!(d < 1e-9, "seed {seed}: {d}");
        assert_eq!(parse(&emit(&l)).unwrap(), l);
    }
    for (name, c) in built_in().into_iter().step_by(3) {
        let l = lower(&c);
        assert!(is_lowered(&l));
        let zero = StateVector::zero(c.n_qubits).unwrap();
        assert!(branch_infidelity(&c, &l, &zero).expect("same branches") < 1e-9, "{name}");
    }
}

#[test]
fn lax_parsing_skips_unknown_gates() {
    let text = "OPENQASM 3.0;\ninclude \"stdgates.inc\";\nqubit[2] q;\nu3(0.1, 0.2, 0.3) q[0];\ncx q[0], q[1];\n";
    assert!(parse(text).is_err());
    let lax = parse_with(text, ParseOptions { strict: false }).unwrap();
    assert_eq!(lax.skipped, vec![(4, "u3(0.1, 0.2, 0.3) q[0]".to_string())]);
    assert_eq!(lax.circuit.ops.len(), 1);
}

#[test]
fn hand_written_programs() {
    let text =
        "OPENQASM 3.0;\n// comment\nqubit[2] q;\nbit[1] c;\nrz(-pi/4) q[1]; cx q[1], q[0];\nc[0] = measure q[0];\n";
    let c = parse(text).unwrap();
    assert_eq!((c.n_qubits, c.n_clbits, c.ops.len()), (2, 1, 3));
    for (text, line) in [
        ("OPENQASM 2.0;\n", 1),
        ("OPENQASM 3.0;\nqubit[1] q;\nrx(pi q[0];\n", 3),
        ("OPENQASM 3.0;\nqubit[1] q;\n\nh q[0]\n", 4),
        ("OPENQASM 3.0;\nqubit[1] q;\nbit[1] c;\nmeasure q[0] -> c[3];\n", 4),
    ] {
        match parse(text) {
            Err(yjunction::Error::Qasm { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
            other => panic!("{text:?}: {other:?}"),
        }
    }
}
