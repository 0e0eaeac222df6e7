//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! A criterion fails when any of its sub-items fails. The process exits
//! non-zero when a failing sub-item is not one of the documented deviations
//! listed in [`KNOWN`], or on any failure when `ACCEPTANCE_STRICT` is set.

mod common;

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8};
use std::time::{Duration, Instant};

use common::{branch_distance, random_circuit, random_input};
use yjunction::experiment::{run, Mode, RunConfig};
use yjunction::fixture::compare_with_reference;
use yjunction::qasm::{emit, lower, parse};
use yjunction_core::circuit::{enumerate_branches, gate_circuit, init_circuit, u023, unitary_matrix, Circuit, Ideal};
use yjunction_core::encoding::{EncodingId, Expected, Label, LogicalEncoding};
use yjunction_core::linalg::{abs, c, cis, phase_insensitive_fidelity, CMatrix};
use yjunction_core::noise::NoiseModel;
use yjunction_core::pauli::{Letter, PauliString};
use yjunction_core::protocol::{logical_paulis, GateId, GateProtocol, OutcomeString};
use yjunction_core::rng::{counter, stream, Purpose};
use yjunction_core::shots::{exact_corrected_state, BranchTable};
use yjunction_core::statevector::StateVector;
use yjunction_core::tomography::{
    apply_unitary, choi_from_outputs, label_vector, process_fidelity, process_inputs, reconstruct, DensityMatrix,
};
use yjunction_core::C64;

/// Sub-items that fail for documented reasons.
const KNOWN: &[(u8, &str)] =
    &[(1, "Y1 1 W2"), (3, "T"), (4, "T"), (6, "T exact"), (6, "T sampled"), (6, "RxxP sampled"), (6, "RxxM sampled")];

type Criterion = (u8, &'static str, fn() -> Report);

struct Report {
    failing: Vec<String>,
    detail: String,
}

impl Report {
    fn new() -> Report {
        Report { failing: Vec::new(), detail: String::new() }
    }

    fn item(&mut self, name: impl Into<String>, ok: bool) {
        if !ok {
            self.failing.push(name.into());
        }
    }

    fn note(&mut self, s: impl AsRef<str>) {
        if !self.detail.is_empty() {
            self.detail.push_str("; ");
        }
        self.detail.push_str(s.as_ref());
    }

    fn deadline(&mut self, start: Instant, limit: Duration) {
        let t = start.elapsed();
        self.note(format!("{:.2}s", t.as_secs_f64()));
        self.item("runtime", t < limit);
    }
}

fn dense_expectation(state: &StateVector, op: &PauliString) -> f64 {
    let v = CMatrix::from_column_slice(state.amps().len(), 1, state.amps());
    (v.adjoint() * op.to_matrix() * &v)[(0, 0)].re
}

fn c1_encodings() -> Report {
    let start = Instant::now();
    let mut r = Report::new();
    let mut worst = 0.0f64;
    for id in [EncodingId::Y1, EncodingId::Y2] {
        let enc = LogicalEncoding::new(id);
        let names: Vec<&str> = enc.gauge_ops().iter().map(|g| g.name).collect();
        let basis_labels: Vec<Vec<Label>> = process_inputs(enc.logical_qubits())
            .into_iter()
            .filter(|l| l.iter().all(|x| matches!(x, Label::Zero | Label::One)))
            .collect();
        for labels in basis_labels {
            let st = enc.basis_state(&labels).unwrap();
            for g in enc.gauge_ops() {
                // Every W and h is −1 on the code space; each n reads −1 on
                // |0⟩ and +1 on |1⟩ of its logical qubit.
                let want = match g.expected {
                    Expected::Label(q) if g.name.starts_with('n') => {
                        if labels[q] == Label::Zero {
                            -1.0
                        } else {
                            1.0
                        }
                    }
                    _ => -1.0,
                };
                let e = dense_expectation(&st, &g.op);
                let tag: String = labels.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",");
                let ok = (e - want).abs() < 1e-12;
                worst = worst.max((e.abs() - 1.0).abs());
                if !ok {
                    r.note(format!("{id} |{tag}> {} = {e:+.3}, want {want:+}", g.name));
                }
                r.item(format!("{id} {tag} {}", g.name), ok);
            }
        }
        r.note(format!("{id}: {} operators", names.len()));
    }
    r.item("eigenstates", worst < 1e-12);
    r.deadline(start, Duration::from_secs(1));
    r
}

fn c2_geometric_phase() -> Report {
    let start = Instant::now();
    let mut r = Report::new();
    let o = OutcomeString::new(0b111, 3);
    for (g, tau) in
        [(GateId::S, FRAC_PI_2), (GateId::Sdg, -FRAC_PI_2), (GateId::T, FRAC_PI_4), (GateId::Tdg, -FRAC_PI_4)]
    {
        let m = GateProtocol::new(g).conditional_logical_action(o).unwrap();
        let want = [cis(-tau / 2.0), cis(tau / 2.0)];
        // Remove the global phase using the largest entry.
        let phase = want[0] / (m[(0, 0)] / abs(m[(0, 0)]));
        let mut err = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                let w = if i == j { want[i] } else { c(0.0, 0.0) };
                err = err.max(abs(m[(i, j)] * phase - w));
            }
        }
        r.note(format!("{g} {err:.1e}"));
        r.item(g.name(), err < 1e-9);
    }
    r.deadline(start, Duration::from_secs(1));
    r
}

fn c3_frame_tables() -> Report {
    let start = Instant::now();
    let mut r = Report::new();
    for g in GateId::BRAIDS {
        let p = GateProtocol::new(g);
        match p.derive_frame_table() {
            Ok(t) => {
                let rows = compare_with_reference(g, &t).unwrap();
                let n = rows.iter().filter(|x| x.matches()).count();
                r.note(format!("{g} {n}/8"));
                r.item(g.name(), n == 8);
            }
            Err(e) => {
                r.note(format!("{g} not derivable ({e})"));
                r.item(g.name(), false);
            }
        }
    }
    r.deadline(start, Duration::from_secs(5));
    r
}

fn logical_fidelity(enc: &LogicalEncoding, state: &StateVector, target: &[C64]) -> f64 {
    phase_insensitive_fidelity(&enc.logical_coordinates(state).unwrap(), target)
}

fn c4_determinism() -> Report {
    let mut r = Report::new();
    for g in GateId::ALL {
        let p = GateProtocol::new(g);
        let enc = p.encoding().clone();
        let mut min = 1.0f64;
        for labels in process_inputs(enc.logical_qubits()) {
            let target = apply_unitary(p.ideal(), &label_vector(&labels));
            for b in p.branches(&enc.basis_state(&labels).unwrap()).unwrap() {
                min = min.min(logical_fidelity(&enc, &b.corrected, &target));
            }
        }
        let ok = (min - 1.0).abs() < 1e-9;
        if !ok {
            r.note(format!("{g} min fidelity {min:.6}"));
        }
        r.item(g.name(), ok);
    }
    if r.failing.is_empty() {
        r.note("all branches, all inputs at fidelity 1");
    }
    r
}

fn c5_outcome_statistics() -> Report {
    let mut r = Report::new();
    let n = 1usize << 15;
    let hi = 0.25 * FRAC_PI_8.cos().powi(2);
    let lo = 0.25 * FRAC_PI_8.sin().powi(2);
    for (gi, g) in [GateId::S, GateId::T].into_iter().enumerate() {
        let p = GateProtocol::new(g);
        let st = p.encoding().basis_state(&[Label::Zero]).unwrap();
        let mut hist = [0usize; 8];
        for shot in 0..n {
            let mut rng = stream(2024, Purpose::Measurement, counter(gi as u64, shot as u64));
            let run = p.run(&st, yjunction_core::protocol::Mode::Sampled(&mut rng)).unwrap();
            hist[run.outcome.bits() as usize] += 1;
        }
        let mut worst = 0.0f64;
        for (o, &h) in hist.iter().enumerate() {
            let want = match (g, o) {
                (GateId::S, _) => 0.125,
                (_, 0b000 | 0b011 | 0b100 | 0b111) => hi,
                _ => lo,
            };
            let sigma = (want * (1.0 - want) / n as f64).sqrt();
            worst = worst.max((h as f64 / n as f64 - want).abs() / sigma);
        }
        r.note(format!("{g} worst {worst:.2}σ"));
        r.item(g.name(), worst < 5.0);
    }
    r
}

fn c6_noiseless_process() -> Report {
    let start = Instant::now();
    let mut r = Report::new();
    for g in GateId::ALL {
        let ex = run(&RunConfig { mode: Mode::Exact, bootstrap: 0, ..RunConfig::new(g) }).unwrap();
        let f = ex.process.unwrap().fidelity;
        r.item(format!("{g} exact"), (f - 1.0).abs() < 1e-9);
        let sa = run(&RunConfig { shots: 1 << 15, bootstrap: 50, ..RunConfig::new(g) }).unwrap();
        let p = sa.process.unwrap();
        let z = (p.fidelity - 1.0).abs() / p.stderr;
        r.item(format!("{g} sampled"), z <= 3.0);
        r.note(format!("{g} exact {:.4} sampled {:.4}±{:.4} ({z:.1}σ)", f, p.fidelity, p.stderr));
    }
    r.deadline(start, Duration::from_secs(120));
    r
}

fn c7_circuits() -> Report {
    let mut r = Report::new();
    for id in [EncodingId::Y1, EncodingId::Y2] {
        let enc = LogicalEncoding::new(id);
        for labels in process_inputs(enc.logical_qubits()) {
            let c = init_circuit(id, &labels).unwrap();
            let s = enumerate_branches(&c, &StateVector::zero(c.n_qubits).unwrap(), &mut Ideal).unwrap();
            let f = s[0].state.fidelity(&enc.basis_state(&labels).unwrap()).unwrap();
            r.item(format!("init {id} {labels:?}"), s.len() == 1 && (f - 1.0).abs() < 1e-9);
        }
    }
    let mut branches = 0;
    for g in GateId::ALL {
        let p = GateProtocol::new(g);
        let enc = p.encoding().clone();
        for labels in process_inputs(enc.logical_qubits()) {
            let c = gate_circuit(g, &labels).unwrap();
            let pb = p.branches(&enc.basis_state(&labels).unwrap()).unwrap();
            let cb = enumerate_branches(&c, &StateVector::zero(c.n_qubits).unwrap(), &mut Ideal).unwrap();
            let mut ok = pb.len() == cb.len().max(1);
            for b in &cb {
                branches += 1;
                let o = OutcomeString::from_bits(&b.clbits);
                let Some(q) = pb.iter().find(|x| x.outcome == o) else {
                    ok = false;
                    continue;
                };
                let mut s = b.state.clone();
                p.correct_physical(&mut s, o).unwrap();
                ok &= (q.probability - b.probability).abs() < 1e-9;
                ok &= (s.fidelity(&q.corrected).unwrap() - 1.0).abs() < 1e-9;
            }
            r.item(format!("{g} {labels:?}"), ok);
        }
    }
    r.note(format!("{branches} circuit branches, all preparation circuits"));
    r
}

fn c8_u023() -> Report {
    let mut r = Report::new();
    let j = LogicalEncoding::y1().junction();
    let x0 = PauliString::single(4, j.center, Letter::X).unwrap();
    let id = CMatrix::identity(16, 16);
    for tau in [0.0, FRAC_PI_8, FRAC_PI_4, FRAC_PI_2] {
        let v = unitary_matrix(4, &u023(&j, tau)).unwrap();
        let obs = j.hamiltonian(4, FRAC_PI_2, tau).unwrap().to_matrix();
        let mut err = 0.0f64;
        for sign in [1.0, -1.0] {
            let single = (&id + x0.to_matrix() * c(sign, 0.0)) * c(0.5, 0.0);
            let target = (&id + &obs * c(sign, 0.0)) * c(0.5, 0.0);
            let lhs = &v * single * v.adjoint();
            err = err.max((lhs - target).iter().map(|x| abs(*x)).fold(0.0, f64::max));
        }
        r.note(format!("τ={tau:.4} {err:.1e}"));
        r.item(format!("tau {tau}"), err < 1e-9);
    }
    r
}

fn exact_outputs(g: GateId) -> (GateProtocol, Vec<DensityMatrix>) {
    let p = GateProtocol::new(g);
    let mut outs = Vec::new();
    for labels in process_inputs(p.encoding().logical_qubits()) {
        let t = BranchTable::compute(&gate_circuit(g, &labels).unwrap(), p.encoding(), &[]).unwrap();
        outs.push(exact_corrected_state(&t, p.frame_table(), 0.0).unwrap());
    }
    (p, outs)
}

fn c9_tomography() -> Report {
    let mut r = Report::new();
    for g in [GateId::I, GateId::S, GateId::Sdg, GateId::Tdg] {
        let (p, outs) = exact_outputs(g);
        for prob in [0.1, 0.2] {
            // A depolarizing channel shrinks every non-identity expectation by 1 − p.
            let noisy: Vec<DensityMatrix> = outs
                .iter()
                .map(|rho| {
                    let e: Vec<(PauliString, f64)> = logical_paulis(1)
                        .into_iter()
                        .filter(|q| !q.is_identity())
                        .map(|q| {
                            let x = rho.expectation(&q);
                            (q, (1.0 - prob) * x)
                        })
                        .collect();
                    reconstruct(1, &e).unwrap()
                })
                .collect();
            let f = process_fidelity(&choi_from_outputs(1, &noisy).unwrap(), p.ideal());
            r.item(format!("depolarizing {g} {prob}"), (f - (1.0 - 0.75 * prob)).abs() < 1e-6);
        }
    }
    // Logical readout flips on the identity protocol, which records no
    // check outcomes, in both encodings.
    let p_ro = 0.05;
    let mut worst = 0.0f64;
    for id in [EncodingId::Y1, EncodingId::Y2] {
        let base = RunConfig { mode: Mode::Exact, bootstrap: 0, encoding: Some(id), ..RunConfig::new(GateId::I) };
        let clean = run(&base).unwrap();
        let noisy = run(&RunConfig { noise: NoiseModel { p_readout: p_ro, ..NoiseModel::NONE }, ..base }).unwrap();
        let mut ok = true;
        for (a, b) in clean.inputs.iter().zip(&noisy.inputs) {
            for ((q, x, _), (q2, y, _)) in a.expectations.iter().zip(&b.expectations) {
                let factor = (1.0 - 2.0 * p_ro).powi(q.weight() as i32);
                let d = (y - factor * x).abs();
                worst = worst.max(d);
                ok &= q == q2 && d < 1e-6;
            }
        }
        r.item(format!("readout {id}"), ok);
    }
    r.note(format!("depolarizing p ∈ {{0.1, 0.2}}; readout attenuation worst deviation {worst:.1e}"));
    r
}

fn c10_noise_direction() -> Report {
    let mut r = Report::new();
    let f = |g: GateId| {
        let cfg = RunConfig { shots: 1 << 13, bootstrap: 0, noise: NoiseModel::default(), ..RunConfig::new(g) };
        run(&cfg).unwrap().process.unwrap().fidelity
    };
    let [i, s, sdg, t, tdg, rp, rm] = GateId::ALL.map(f);
    r.note(format!(
        "I {:.2}, S {:.2}, Sdg {:.2}, T {:.2}, Tdg {:.2}, RxxP {:.2}, RxxM {:.2} %",
        100.0 * i,
        100.0 * s,
        100.0 * sdg,
        100.0 * t,
        100.0 * tdg,
        100.0 * rp,
        100.0 * rm
    ));
    r.item("ideal > S/Sdg", i > s.max(sdg));
    r.item("S/Sdg > T/Tdg", s.min(sdg) > t.max(tdg));
    r.item("Y1 loss < Y2 loss", (1.0 - s).max(1.0 - sdg) < (1.0 - rp).min(1.0 - rm));
    r
}

fn c11_qasm() -> Report {
    let mut r = Report::new();
    let mut worst = 0.0f64;
    let mut check = |name: String, c: &Circuit, input: &StateVector, r: &mut Report| {
        let back = parse(&emit(c));
        let d = back.ok().and_then(|b| branch_distance(c, &b, input));
        if let Some(d) = d {
            worst = worst.max(d);
        }
        r.item(name, d.is_some_and(|d| d <= 1e-12));
    };
    for seed in 0..1000 {
        let c = random_circuit(seed);
        check(format!("random {seed}"), &c, &random_input(c.n_qubits, seed), &mut r);
    }
    let mut count = 0;
    for id in [EncodingId::Y1, EncodingId::Y2] {
        for labels in process_inputs(id.logical_qubits()) {
            let c = init_circuit(id, &labels).unwrap();
            check(format!("init {id} {labels:?}"), &c, &StateVector::zero(c.n_qubits).unwrap(), &mut r);
            count += 1;
        }
    }
    for g in GateId::ALL {
        for labels in process_inputs(g.encoding().logical_qubits()) {
            let c = gate_circuit(g, &labels).unwrap();
            let zero = StateVector::zero(c.n_qubits).unwrap();
            check(format!("{g} {labels:?}"), &c, &zero, &mut r);
            check(format!("{g} {labels:?} lowered"), &lower(&c), &zero, &mut r);
            count += 2;
        }
    }
    r.note(format!("1000 random + {count} built-in circuits, worst difference {worst:.1e}"));
    r
}

fn main() {
    let strict = std::env::var_os("ACCEPTANCE_STRICT").is_some();
    let criteria: [Criterion; 11] = [
        (1, "encoding eigenvalues", c1_encodings),
        (2, "all-minus geometric phase", c2_geometric_phase),
        (3, "frame tables", c3_frame_tables),
        (4, "gate determinism", c4_determinism),
        (5, "outcome statistics", c5_outcome_statistics),
        (6, "noiseless process fidelity", c6_noiseless_process),
        (7, "circuit equivalence", c7_circuits),
        (8, "U023 conjugation", c8_u023),
        (9, "tomography oracles", c9_tomography),
        (10, "noise direction", c10_noise_direction),
        (11, "QASM round trip", c11_qasm),
    ];
    let known: BTreeSet<(u8, &str)> = KNOWN.iter().copied().collect();
    let mut passed = 0;
    let mut unexpected = Vec::new();
    for (n, name, f) in criteria {
        let r = f();
        if r.failing.is_empty() {
            passed += 1;
            println!("PASS criterion {n:>2} {name}: {}", r.detail);
        } else {
            let new: Vec<&String> = r.failing.iter().filter(|x| !known.contains(&(n, x.as_str()))).collect();
            let tag = if new.is_empty() { "documented deviation" } else { "UNEXPECTED" };
            println!("FAIL criterion {n:>2} {name}: {} [failing: {}] ({tag})", r.detail, r.failing.join(", "));
            unexpected.extend(new.into_iter().map(|x| format!("{n}: {x}")));
        }
    }
    println!("acceptance: {passed}/11 criteria pass");
    if !unexpected.is_empty() {
        println!("unexpected failures: {}", unexpected.join(", "));
        std::process::exit(1);
    }
    if strict && passed < 11 {
        std::process::exit(1);
    }
}
