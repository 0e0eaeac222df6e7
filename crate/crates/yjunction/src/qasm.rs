//! OpenQASM 3 text for [`Circuit`]s.
//!
//! The emitter writes one statement per line except for X- and Y-basis
//! measurements, which are written as their basis-change sandwich on a
//! single line:
//!
//! ```text
//! h q[5]; measure q[5] -> c[0]; h q[5];
//! sdg q[5]; h q[5]; measure q[5] -> c[1]; h q[5]; s q[5];
//! ```
//!
//! The parser folds exactly those single-line patterns back into basis
//! measurements, so `parse(emit(c)) == c`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt::Write;

use yjunction_core::circuit::{Basis, Circuit, Op};
use yjunction_core::gate::Gate;

use crate::error::{Error, Result};

pub const HEADER: &str = "OPENQASM 3.0;\ninclude \"stdgates.inc\";";

/// Gates of the hardware basis targeted by [`lower`].
pub const HARDWARE_BASIS: [&str; 6] = ["cz", "id", "rx", "rz", "sx", "x"];

fn angle(t: f64) -> String {
    format!("{t:.16e}")
}

fn gate_text(g: &Gate) -> String {
    let qs: Vec<String> = g.qubits().iter().map(|q| format!("q[{q}]")).collect();
    match g.param() {
        Some(t) => format!("{}({}) {};", g.name(), angle(t), qs.join(", ")),
        None => format!("{} {};", g.name(), qs.join(", ")),
    }
}

/// Writes an OpenQASM 3 program.
pub fn emit(c: &Circuit) -> String {
    let mut s = String::new();
    writeln!(s, "{HEADER}").unwrap();
    writeln!(s, "qubit[{}] q;", c.n_qubits).unwrap();
    if c.n_clbits > 0 {
        writeln!(s, "bit[{}] c;", c.n_clbits).unwrap();
    }
    for op in &c.ops {
        match *op {
            Op::Gate(g) => writeln!(s, "{}", gate_text(&g)).unwrap(),
            Op::Measure { qubit: k, basis, clbit: j } => {
                let m = format!("measure q[{k}] -> c[{j}];");
                let line = match basis {
                    Basis::Z => m,
                    Basis::X => format!("h q[{k}]; {m} h q[{k}];"),
                    Basis::Y => format!("sdg q[{k}]; h q[{k}]; {m} h q[{k}]; s q[{k}];"),
                };
                writeln!(s, "{line}").unwrap();
            }
            Op::Barrier => writeln!(s, "barrier q;").unwrap(),
        }
    }
    s
}

/// Parser settings.
#[derive(Debug, Clone, Copy)]
pub struct ParseOptions {
    /// Reject unknown gates instead of skipping them.
    pub strict: bool,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions { strict: true }
    }
}

/// A parsed program together with the statements that were skipped in
/// non-strict mode.
#[derive(Debug, Clone)]
pub struct Parsed {
    pub circuit: Circuit,
    pub skipped: Vec<(usize, String)>,
}

pub fn parse(text: &str) -> Result<Circuit> {
    Ok(parse_with(text, ParseOptions::default())?.circuit)
}

#[derive(Debug, Clone, PartialEq)]
enum Stmt {
    Gate(Gate),
    Measure { qubit: usize, clbit: usize },
    Barrier,
}

pub fn parse_with(text: &str, opts: ParseOptions) -> Result<Parsed> {
    let mut circuit = Circuit::new(0, 0);
    let mut skipped = Vec::new();
    let mut saw_version = false;
    let mut qreg: Option<String> = None;
    let mut creg: Option<String> = None;
    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let line = match raw.find("//") {
            Some(i) => &raw[..i],
            None => raw,
        };
        let mut stmts: Vec<(usize, Stmt)> = Vec::new();
        let mut offset = 0;
        for piece in line.split_inclusive(';') {
            let col = offset + 1 + (piece.len() - piece.trim_start().len());
            offset += piece.len();
            let st = piece.trim();
            if st.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Qasm { line: line_no, col, msg };
            let Some(st) = st.strip_suffix(';') else {
                return Err(err("missing ';'".into()));
            };
            let st = st.trim();
            let (head, rest) = split_head(st);
            match head {
                "OPENQASM" => {
                    if !rest.trim().starts_with('3') {
                        return Err(err(format!("unsupported version {:?}", rest.trim())));
                    }
                    saw_version = true;
                }
                "include" => {}
                "qubit" => {
                    let (n, name) = parse_decl(rest).map_err(err)?;
                    circuit.n_qubits = n;
                    qreg = Some(name);
                }
                "bit" => {
                    let (n, name) = parse_decl(rest).map_err(err)?;
                    circuit.n_clbits = n;
                    creg = Some(name);
                }
                "barrier" => stmts.push((col, Stmt::Barrier)),
                "measure" => {
                    let (q, c) = rest.split_once("->").ok_or_else(|| err("expected '->'".into()))?;
                    let qubit = parse_index(q, qreg.as_deref(), circuit.n_qubits).map_err(err)?;
                    let clbit = parse_index(c, creg.as_deref(), circuit.n_clbits).map_err(err)?;
                    stmts.push((col, Stmt::Measure { qubit, clbit }));
                }
                _ if st.contains("= measure") || st.contains("=measure") => {
                    let (c, q) = st.split_once('=').unwrap();
                    let q = q.trim().strip_prefix("measure").unwrap();
                    let qubit = parse_index(q, qreg.as_deref(), circuit.n_qubits).map_err(err)?;
                    let clbit = parse_index(c, creg.as_deref(), circuit.n_clbits).map_err(err)?;
                    stmts.push((col, Stmt::Measure { qubit, clbit }));
                }
                _ => {
                    if !saw_version {
                        return Err(err("missing OPENQASM 3 header".into()));
                    }
                    let (name, params, args) = split_gate(st).map_err(err)?;
                    let params: Vec<f64> =
                        params.iter().map(|p| eval_expr(p)).collect::<std::result::Result<_, _>>().map_err(err)?;
                    let qubits: Vec<usize> = args
                        .iter()
                        .map(|a| parse_index(a, qreg.as_deref(), circuit.n_qubits))
                        .collect::<std::result::Result<_, _>>()
                        .map_err(err)?;
                    match Gate::from_parts(name, &params, &qubits) {
                        Ok(g) => {
                            g.validate(circuit.n_qubits).map_err(|e| err(e.to_string()))?;
                            stmts.push((col, Stmt::Gate(g)));
                        }
                        Err(e) if opts.strict => return Err(err(e.to_string())),
                        Err(_) => skipped.push((line_no, st.to_string())),
                    }
                }
            }
        }
        let plain: Vec<Stmt> = stmts.iter().map(|(_, s)| s.clone()).collect();
        if let Some(op) = fold_basis_measure(&plain) {
            circuit.ops.push(op);
        } else {
            for s in plain {
                circuit.ops.push(match s {
                    Stmt::Gate(g) => Op::Gate(g),
                    Stmt::Measure { qubit, clbit } => Op::Measure { qubit, basis: Basis::Z, clbit },
                    Stmt::Barrier => Op::Barrier,
                });
            }
        }
    }
    if !saw_version {
        return Err(Error::Qasm { line: 1, col: 1, msg: "missing OPENQASM 3 header".into() });
    }
    Ok(Parsed { circuit, skipped })
}

fn fold_basis_measure(stmts: &[Stmt]) -> Option<Op> {
    use Stmt::{Gate as G, Measure as M};
    match stmts {
        [G(Gate::H(a)), M { qubit, clbit }, G(Gate::H(b))] if a == qubit && b == qubit => {
            Some(Op::Measure { qubit: *qubit, basis: Basis::X, clbit: *clbit })
        }
        [G(Gate::Sdg(a)), G(Gate::H(b)), M { qubit, clbit }, G(Gate::H(c)), G(Gate::S(d))]
            if [a, b, c, d].iter().all(|x| *x == qubit) =>
        {
            Some(Op::Measure { qubit: *qubit, basis: Basis::Y, clbit: *clbit })
        }
        _ => None,
    }
}

fn split_head(st: &str) -> (&str, &str) {
    let end = st.find(|c: char| c.is_whitespace() || c == '[' || c == '(').unwrap_or(st.len());
    (&st[..end], &st[end..])
}

fn parse_decl(rest: &str) -> std::result::Result<(usize, String), String> {
    let rest = rest.trim();
    let inner = rest.strip_prefix('[').ok_or("expected '[size]'")?;
    let (n, name) = inner.split_once(']').ok_or("expected ']'")?;
    let n: usize = n.trim().parse().map_err(|_| format!("bad register size {n:?}"))?;
    let name = name.trim();
    if name.is_empty() {
        return Err("missing register name".into());
    }
    Ok((n, name.to_string()))
}

fn parse_index(s: &str, reg: Option<&str>, size: usize) -> std::result::Result<usize, String> {
    let s = s.trim();
    let reg = reg.ok_or("register used before declaration")?;
    let inner = s
        .strip_prefix(reg)
        .and_then(|r| r.trim().strip_prefix('['))
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| format!("expected {reg}[index], found {s:?}"))?;
    let i: usize = inner.trim().parse().map_err(|_| format!("bad index {inner:?}"))?;
    if i >= size {
        return Err(format!("index {i} out of range for {reg}[{size}]"));
    }
    Ok(i)
}

fn split_gate(st: &str) -> std::result::Result<(&str, Vec<&str>, Vec<&str>), String> {
    let (name, rest) = split_head(st);
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(format!("bad statement {st:?}"));
    }
    let rest = rest.trim_start();
    let (params, args) = if let Some(r) = rest.strip_prefix('(') {
        let mut depth = 1;
        let mut close = None;
        for (i, ch) in r.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 {
                        close = Some(i);
                        break;
                    }
                }
                _ => {}
            }
        }
        let close = close.ok_or("unbalanced parentheses")?;
        (r[..close].split(',').map(str::trim).collect(), &r[close + 1..])
    } else {
        (Vec::new(), rest)
    };
    let args: Vec<&str> = args.split(',').map(str::trim).filter(|a| !a.is_empty()).collect();
    if args.is_empty() {
        return Err(format!("{name} has no qubit arguments"));
    }
    Ok((name, params, args))
}

/// Evaluates a numeric parameter: literals, `pi`/`π`, `+ − * /`, unary minus
/// and parentheses.
pub fn eval_expr(s: &str) -> std::result::Result<f64, String> {
    let tokens = tokenize(s)?;
    let mut p = ExprParser { t: &tokens, i: 0 };
    let v = p.sum()?;
    if p.i != tokens.len() {
        return Err(format!("trailing input in {s:?}"));
    }
    Ok(v)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Op(char),
}

fn tokenize(s: &str) -> std::result::Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        if ch.is_whitespace() {
            i += 1;
        } else if "+-*/()".contains(ch) {
            out.push(Tok::Op(ch));
            i += 1;
        } else if ch == 'π' {
            out.push(Tok::Num(PI));
            i += 1;
        } else if ch.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            match word.as_str() {
                "pi" => out.push(Tok::Num(PI)),
                _ => return Err(format!("unknown identifier {word:?}")),
            }
        } else if ch.is_ascii_digit() || ch == '.' {
            let start = i;
            while i < chars.len() {
                let c = chars[i];
                let exp_sign = (c == '+' || c == '-') && i > start && matches!(chars[i - 1], 'e' | 'E');
                if c.is_ascii_digit() || c == '.' || c == 'e' || c == 'E' || exp_sign {
                    i += 1;
                } else {
                    break;
                }
            }
            let lit: String = chars[start..i].iter().collect();
            out.push(Tok::Num(lit.parse().map_err(|_| format!("bad number {lit:?}"))?));
        } else {
            return Err(format!("unexpected character {ch:?}"));
        }
    }
    Ok(out)
}

struct ExprParser<'a> {
    t: &'a [Tok],
    i: usize,
}

impl ExprParser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.t.get(self.i)
    }

    fn sum(&mut self) -> std::result::Result<f64, String> {
        let mut v = self.product()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.i += 1;
            let r = self.product()?;
            v = if c == '+' { v + r } else { v - r };
        }
        Ok(v)
    }

    fn product(&mut self) -> std::result::Result<f64, String> {
        let mut v = self.unary()?;
        while let Some(Tok::Op(c @ ('*' | '/'))) = self.peek().cloned() {
            self.i += 1;
            let r = self.unary()?;
            v = if c == '*' { v * r } else { v / r };
        }
        Ok(v)
    }

    fn unary(&mut self) -> std::result::Result<f64, String> {
        match self.peek().cloned() {
            Some(Tok::Op('-')) => {
                self.i += 1;
                Ok(-self.unary()?)
            }
            Some(Tok::Op('+')) => {
                self.i += 1;
                self.unary()
            }
            Some(Tok::Op('(')) => {
                self.i += 1;
                let v = self.sum()?;
                if self.peek() != Some(&Tok::Op(')')) {
                    return Err("expected ')'".into());
                }
                self.i += 1;
                Ok(v)
            }
            Some(Tok::Num(v)) => {
                self.i += 1;
                Ok(v)
            }
            other => Err(format!("unexpected token {other:?}")),
        }
    }
}

/// Rewrites a circuit into `{cz, id, rx, rz, sx, x}` plus Z-basis
/// measurements. Each gate is replaced by an equivalent sequence up to a
/// global phase.
pub fn lower(c: &Circuit) -> Circuit {
    let mut out = Circuit::new(c.n_qubits, c.n_clbits);
    for op in &c.ops {
        match *op {
            Op::Gate(g) => out.extend_gates(lower_gate(&g)),
            Op::Measure { qubit: q, basis, clbit } => {
                let (pre, post) = match basis {
                    Basis::Z => (vec![], vec![]),
                    Basis::X => (lower_gate(&Gate::H(q)), lower_gate(&Gate::H(q))),
                    Basis::Y => (
                        [lower_gate(&Gate::Sdg(q)), lower_gate(&Gate::H(q))].concat(),
                        [lower_gate(&Gate::H(q)), lower_gate(&Gate::S(q))].concat(),
                    ),
                };
                out.extend_gates(pre);
                out.measure(q, Basis::Z, clbit);
                out.extend_gates(post)
            }
            Op::Barrier => out.barrier(),
        };
    }
    out
}

fn lower_gate(g: &Gate) -> Vec<Gate> {
    use Gate::*;
    match *g {
        I(_) | X(_) | Sx(_) | Rx(..) | Rz(..) | Cz(..) => vec![*g],
        H(q) => vec![Rz(q, FRAC_PI_2), Sx(q), Rz(q, FRAC_PI_2)],
        Y(q) => vec![Rz(q, PI), X(q)],
        Z(q) => vec![Rz(q, PI)],
        S(q) => vec![Rz(q, FRAC_PI_2)],
        Sdg(q) => vec![Rz(q, -FRAC_PI_2)],
        T(q) => vec![Rz(q, FRAC_PI_4)],
        Tdg(q) => vec![Rz(q, -FRAC_PI_4)],
        Sxdg(q) => vec![Sx(q), X(q)],
        Ry(q, t) => vec![Rz(q, -FRAC_PI_2), Rx(q, t), Rz(q, FRAC_PI_2)],
        Cx(c, t) => [lower_gate(&H(t)), vec![Cz(c, t)], lower_gate(&H(t))].concat(),
        Cy(c, t) => [lower_gate(&Sdg(t)), lower_gate(&Cx(c, t)), lower_gate(&S(t))].concat(),
        Ccx(a, b, t) => [
            H(t),
            Cx(b, t),
            Tdg(t),
            Cx(a, t),
            T(t),
            Cx(b, t),
            Tdg(t),
            Cx(a, t),
            T(b),
            T(t),
            H(t),
            Cx(a, b),
            T(a),
            Tdg(b),
            Cx(a, b),
        ]
        .iter()
        .flat_map(lower_gate)
        .collect(),
    }
}

/// True when every gate is in [`HARDWARE_BASIS`] and every measurement is
/// in the Z basis.
pub fn is_lowered(c: &Circuit) -> bool {
    c.ops.iter().all(|op| match op {
        Op::Gate(g) => HARDWARE_BASIS.contains(&g.name()),
        Op::Measure { basis, .. } => *basis == Basis::Z,
        Op::Barrier => true,
    })
}
