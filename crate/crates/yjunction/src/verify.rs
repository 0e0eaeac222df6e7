//! Self-checks behind `yjunction verify`.
//!
//! A check either passes, fails, or is a known deviation: a published
//! result the simulation reproduces only partially. Known deviations are
//! reported with their reason and only fail the run in strict mode.

use std::fmt;

use yjunction_core::circuit::{enumerate_branches, gate_circuit, init_circuit, run_unitary, Ideal};
use yjunction_core::encoding::{check_codespace, labels_to_string, EncodingId, Expected, Label, LogicalEncoding};
use yjunction_core::linalg::{abs, matrix_alignment, CMatrix};
use yjunction_core::pauli::{string_expectation, Letter, PauliString};
use yjunction_core::protocol::{GateId, GateProtocol, OutcomeString};
use yjunction_core::statevector::StateVector;
use yjunction_core::tomography::process_inputs;
use yjunction_core::Error as CoreError;

use crate::error::Result;
use crate::fixture::{compare_with_reference, Fixture};
use crate::qasm;

#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Pass,
    Fail,
    Known(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match &self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Known(_) => "KNOWN",
        };
        write!(f, "{tag:<5} {}/{}", self.suite, self.name)?;
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        if let Status::Known(why) = &self.status {
            write!(f, " ({why})")?;
        }
        Ok(())
    }
}

fn check(suite: &'static str, name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Check {
    Check { suite, name: name.into(), status: if ok { Status::Pass } else { Status::Fail }, detail: detail.into() }
}

pub const SUITES: [&str; 5] = ["algebra", "encodings", "appendixB", "frames", "circuits"];

pub fn run_suite(name: &str, fixture: Option<&Fixture>) -> Result<Vec<Check>> {
    match name {
        "algebra" => algebra(),
        "encodings" => encodings(),
        "appendixB" => branch_actions(),
        "frames" => frames(fixture),
        "circuits" => circuits(),
        "all" => {
            let mut v = Vec::new();
            for s in SUITES {
                v.extend(run_suite(s, fixture)?);
            }
            Ok(v)
        }
        _ => Err(CoreError::Unsupported(format!("unknown suite {name:?}")).into()),
    }
}

fn matrix_close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
    a.shape() == b.shape() && a.iter().zip(b.iter()).all(|(x, y)| abs(*x - *y) < tol)
}

fn algebra() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let all2: Vec<PauliString> = Letter::ALL
        .iter()
        .flat_map(|&a| Letter::ALL.iter().map(move |&b| PauliString::from_letters(&[a, b]).unwrap()))
        .collect();
    let mut bad = 0;
    for a in &all2 {
        for b in &all2 {
            let prod = a.mul(b)?;
            if !matrix_close(&prod.to_matrix(), &(a.to_matrix() * b.to_matrix()), 1e-14) {
                bad += 1;
            }
            let comm = a.commutes(b)?;
            let ab = a.to_matrix() * b.to_matrix();
            let ba = b.to_matrix() * a.to_matrix();
            if comm != matrix_close(&ab, &ba, 1e-14) {
                bad += 1;
            }
        }
    }
    out.push(check("algebra", "two-qubit products", bad == 0, format!("{bad} mismatches over 256 pairs")));

    let mut worst: f64 = 0.0;
    for enc in [LogicalEncoding::y1(), LogicalEncoding::y2()] {
        let n = enc.physical_qubits();
        for i in 0..=8 {
            for j in 0..=8 {
                let theta = i as f64 * std::f64::consts::PI / 8.0;
                let phi = j as f64 * std::f64::consts::PI / 4.0;
                let h = enc.junction().hamiltonian(n, theta, phi)?.to_matrix();
                let d = h.nrows();
                let dev = (&h * &h - CMatrix::identity(d, d)).iter().map(|x| abs(*x)).fold(0.0, f64::max);
                worst = worst.max(dev);
            }
        }
    }
    out.push(check(
        "algebra",
        "junction observable squares to one",
        worst < 1e-12,
        format!("max deviation {worst:.1e}"),
    ));
    Ok(out)
}

fn bloch(l: Label) -> [f64; 3] {
    let (a, b) = l.amplitudes();
    let ab = a.conj() * b;
    [2.0 * ab.re, 2.0 * ab.im, a.norm_sqr() - b.norm_sqr()]
}

fn encodings() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for id in [EncodingId::Y1, EncodingId::Y2] {
        let enc = LogicalEncoding::new(id);
        for labels in process_inputs(enc.logical_qubits()) {
            let st = enc.basis_state(&labels)?;
            let rep = check_codespace(&st, &enc)?;
            let mut ok = rep.in_codespace();
            for r in &rep.readings {
                if let Expected::Label(q) = r.expected {
                    let want = -bloch(labels[q])[2];
                    ok &= (r.expectation - want).abs() < 1e-9;
                }
            }
            for (q, l) in labels.iter().enumerate() {
                let b = bloch(*l);
                for (axis, want) in b.iter().enumerate() {
                    let e = string_expectation(&st, &enc.logical_observable(q, axis)?)?;
                    ok &= (e - want).abs() < 1e-9;
                }
            }
            out.push(check("encodings", format!("{id} {}", labels_to_string(&labels)), ok, rep.summary()));
        }
    }
    Ok(out)
}

/// The all-(−1) branch of each single-qubit braid acts as the ideal gate.
fn branch_actions() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for g in [GateId::S, GateId::Sdg, GateId::T, GateId::Tdg] {
        let p = GateProtocol::new(g);
        let o = OutcomeString::new(0b111, 3);
        let m = p.conditional_logical_action(o)?;
        let a = matrix_alignment(&m, p.ideal());
        let ok = a > 1.0 - 1e-9;
        out.push(check("appendixB", format!("{g} branch {o}"), ok, ""));
    }
    Ok(out)
}

fn frames(fixture: Option<&Fixture>) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for g in GateId::BRAIDS {
        let p = GateProtocol::new(g);
        let rows = compare_with_reference(g, p.frame_table()).expect("braids have references");
        let name = format!("{g} against reference");
        let closed = match p.derive_frame_table() {
            Ok(_) => None,
            Err(CoreError::NotPauliClosed(list)) => Some(list),
            Err(e) => return Err(e.into()),
        };
        let mut bad = Vec::new();
        let mut ties = Vec::new();
        for (r, best) in rows.iter().zip(p.frame_quality()) {
            if r.matches() {
                continue;
            }
            let reference: PauliString = format!("+{}", r.reference).parse()?;
            let a = p.frame_alignment(r.outcome, &reference)?;
            if closed.is_some() && a > best - 1e-9 {
                ties.push(format!("{} reference {} ties derived {} at {a:.3}", r.outcome, r.reference, r.derived));
            } else {
                bad.push(format!("{} derived {} reference {}", r.outcome, r.derived, r.reference));
            }
        }
        match closed {
            None => out.push(check("frames", name, bad.is_empty(), bad.join("; "))),
            Some(list) => {
                let mut detail = format!("no exact Pauli frame for outcomes {}", list.join(" "));
                for t in bad.iter().chain(&ties) {
                    detail.push_str("; ");
                    detail.push_str(t);
                }
                let status = if bad.is_empty() {
                    Status::Known("reference rows are best Pauli approximations only".into())
                } else {
                    Status::Fail
                };
                out.push(Check { suite: "frames", name, status, detail });
            }
        }
    }
    if let Some(fx) = fixture {
        for f in &fx.frames {
            let p = GateProtocol::new(f.gate);
            let mut bad = Vec::new();
            for (o, c) in &f.rows {
                let derived = p.frame_table().get(*o);
                if derived.letters_string() != c.letters_string() {
                    bad.push(format!("row {o}: fixture {} derived {}", c.letters_string(), derived.letters_string()));
                }
            }
            if f.rows.len() != 8 {
                bad.push(format!("{} rows", f.rows.len()));
            }
            out.push(check("frames", format!("{} fixture", f.gate), bad.is_empty(), bad.join("; ")));
        }
    }
    Ok(out)
}

fn circuits() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for id in [EncodingId::Y1, EncodingId::Y2] {
        let enc = LogicalEncoding::new(id);
        let mut worst: f64 = 1.0;
        for labels in process_inputs(enc.logical_qubits()) {
            let c = init_circuit(id, &labels)?;
            let s = run_unitary(&c, &StateVector::zero(c.n_qubits)?)?;
            worst = worst.min(s.fidelity(&enc.basis_state(&labels)?)?);
        }
        out.push(check(
            "circuits",
            format!("{id} preparation"),
            worst > 1.0 - 1e-9,
            format!("min fidelity {worst:.12}"),
        ));
    }
    for g in GateId::ALL {
        let p = GateProtocol::new(g);
        let enc = p.encoding();
        let mut dp: f64 = 0.0;
        let mut worst: f64 = 1.0;
        let mut round_trip = true;
        for labels in process_inputs(enc.logical_qubits()) {
            let c = gate_circuit(g, &labels)?;
            round_trip &= qasm::parse(&qasm::emit(&c)).map(|d| d == c).unwrap_or(false);
            let pb = p.branches(&enc.basis_state(&labels)?)?;
            let cb = enumerate_branches(&c, &StateVector::zero(c.n_qubits)?, &mut Ideal)?;
            for b in &cb {
                let o = OutcomeString::from_bits(&b.clbits);
                let mut s = b.state.clone();
                p.correct_physical(&mut s, o)?;
                match pb.iter().find(|x| x.outcome == o) {
                    Some(q) => {
                        dp = dp.max((q.probability - b.probability).abs());
                        worst = worst.min(s.fidelity(&q.corrected)?);
                    }
                    None => dp = dp.max(b.probability),
                }
            }
        }
        out.push(check(
            "circuits",
            format!("{g} circuit matches projectors"),
            dp < 1e-9 && worst > 1.0 - 1e-9,
            format!("max probability gap {dp:.1e}, min branch fidelity {worst:.12}"),
        ));
        out.push(check("circuits", format!("{g} QASM round trip"), round_trip, ""));
    }
    Ok(out)
}

/// Summary counts `(pass, fail, known)`.
pub fn tally(checks: &[Check]) -> (usize, usize, usize) {
    checks.iter().fold((0, 0, 0), |(p, f, k), c| match c.status {
        Status::Pass => (p + 1, f, k),
        Status::Fail => (p, f + 1, k),
        Status::Known(_) => (p, f, k + 1),
    })
}
