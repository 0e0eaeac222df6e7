//! CSV and plain-text reports of an experiment.
//!
//! Every value is printed with a fixed number of digits, so the same
//! configuration and seed always give byte-identical files.

use std::fmt::Write as _;
use std::io::Write;

use yjunction_core::linalg::CMatrix;

use crate::error::Result;
use crate::experiment::{input_name, ExperimentResult, Mode};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Txt,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Format, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "txt" => Ok(Format::Txt),
            _ => Err(format!("unknown format {s:?} (csv or txt)")),
        }
    }
}

fn num(x: f64) -> String {
    // -0.0 would otherwise print with a sign.
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.10}")
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Sampled => "sampled",
        Mode::Exact => "exact",
    }
}

pub fn write<W: Write>(r: &ExperimentResult, format: Format, out: W) -> Result<()> {
    match format {
        Format::Csv => write_csv(r, out),
        Format::Txt => {
            let mut out = out;
            out.write_all(to_text(r).as_bytes())?;
            Ok(())
        }
    }
}

pub fn write_csv<W: Write>(r: &ExperimentResult, out: W) -> Result<()> {
    let c = &r.config;
    let shots = match c.mode {
        Mode::Sampled => c.shots.to_string(),
        Mode::Exact => "inf".to_string(),
    };
    let seed = c.seed.to_string();
    let gate = c.gate.to_string();
    let enc = r.encoding.to_string();
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["gate", "encoding", "mode", "input", "quantity", "value", "stderr", "shots", "seed"])?;
    let mut row = |input: &str, q: &str, v: f64, e: f64| {
        w.write_record([&gate, &enc, mode_name(c.mode), input, q, &num(v), &num(e), &shots, &seed])
    };
    if let Some(p) = &r.process {
        row("all", "process_fidelity", p.fidelity, p.stderr)?;
        row("all", "average_gate_fidelity", p.average_gate_fidelity, 0.0)?;
    }
    row("all", "average_depth", r.average_depth(), 0.0)?;
    for inp in &r.inputs {
        let name = input_name(&inp.labels);
        row(&name, "state_fidelity", inp.fidelity, inp.fidelity_stderr)?;
        for (p, v, e) in &inp.expectations {
            row(&name, &format!("expectation_{}", p.letters_string()), *v, *e)?;
        }
        let m = inp.rho.matrix();
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                row(&name, &format!("rho_re_{i}_{j}"), m[(i, j)].re, 0.0)?;
                row(&name, &format!("rho_im_{i}_{j}"), m[(i, j)].im, 0.0)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn percent(v: f64, e: f64) -> String {
    format!("{:.2} ± {:.2} %", 100.0 * v, 100.0 * e)
}

fn grid(s: &mut String, m: &CMatrix, part: fn(f64, f64) -> f64) {
    for i in 0..m.nrows() {
        s.push_str("   ");
        for j in 0..m.ncols() {
            write!(s, " {:>9.5}", part(m[(i, j)].re, m[(i, j)].im) + 0.0).unwrap();
        }
        s.push('\n');
    }
}

pub fn to_text(r: &ExperimentResult) -> String {
    let c = &r.config;
    let mut s = String::new();
    let shots = match c.mode {
        Mode::Sampled => c.shots.to_string(),
        Mode::Exact => "inf".into(),
    };
    writeln!(
        s,
        "gate {}  encoding {}  mode {}  shots {}  seed {}",
        c.gate,
        r.encoding,
        mode_name(c.mode),
        shots,
        c.seed
    )
    .unwrap();
    writeln!(s, "noise {}", c.noise).unwrap();
    s.push('\n');
    writeln!(s, "{:<10} | {:<22} | Av. Depth", "Operation", "Simulation").unwrap();
    let sim = match &r.process {
        Some(p) => percent(p.fidelity, p.stderr),
        None => "-".into(),
    };
    writeln!(s, "{:<10} | {:<22} | {:.1}", c.gate.to_string(), sim, r.average_depth()).unwrap();
    if let Some(p) = &r.process {
        writeln!(s, "average gate fidelity {}", num(p.average_gate_fidelity)).unwrap();
    }
    s.push('\n');
    writeln!(s, "{:<10} | Fidelity", "Input").unwrap();
    for inp in &r.inputs {
        writeln!(s, "{:<10} | {}", input_name(&inp.labels), percent(inp.fidelity, inp.fidelity_stderr)).unwrap();
    }
    for inp in &r.inputs {
        writeln!(s, "\ninput {}", input_name(&inp.labels)).unwrap();
        for (p, v, e) in &inp.expectations {
            writeln!(s, "  <{}> = {} ± {}", p.letters_string(), num(*v), num(*e)).unwrap();
        }
        s.push_str("  rho (real)\n");
        grid(&mut s, inp.rho.matrix(), |re, _| re);
        s.push_str("  rho (imag)\n");
        grid(&mut s, inp.rho.matrix(), |_, im| im);
    }
    s
}
