//! Named gates covering every circuit figure plus the hardware basis
//! (`cz`, `id`, `rx`, `rz`, `sx`, `x`) used for lowering.

use core::f64::consts::FRAC_1_SQRT_2;
use core::ops::Deref;

use crate::error::{Error, Result};
use crate::linalg::{c, cis};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    I(usize),
    H(usize),
    X(usize),
    Y(usize),
    Z(usize),
    S(usize),
    Sdg(usize),
    T(usize),
    Tdg(usize),
    Sx(usize),
    Sxdg(usize),
    Rx(usize, f64),
    Ry(usize, f64),
    Rz(usize, f64),
    /// Controlled-X, `(control, target)`.
    Cx(usize, usize),
    /// Controlled-Y, `(control, target)`.
    Cy(usize, usize),
    Cz(usize, usize),
    /// Toffoli, `(control, control, target)`.
    Ccx(usize, usize, usize),
}

/// Up to three qubit indices, in the gate's argument order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Qubits {
    buf: [usize; 3],
    len: usize,
}

impl Deref for Qubits {
    type Target = [usize];
    fn deref(&self) -> &[usize] {
        &self.buf[..self.len]
    }
}

impl Gate {
    /// Lowercase OpenQASM name.
    pub fn name(&self) -> &'static str {
        match self {
            Gate::I(_) => "id",
            Gate::H(_) => "h",
            Gate::X(_) => "x",
            Gate::Y(_) => "y",
            Gate::Z(_) => "z",
            Gate::S(_) => "s",
            Gate::Sdg(_) => "sdg",
            Gate::T(_) => "t",
            Gate::Tdg(_) => "tdg",
            Gate::Sx(_) => "sx",
            Gate::Sxdg(_) => "sxdg",
            Gate::Rx(..) => "rx",
            Gate::Ry(..) => "ry",
            Gate::Rz(..) => "rz",
            Gate::Cx(..) => "cx",
            Gate::Cy(..) => "cy",
            Gate::Cz(..) => "cz",
            Gate::Ccx(..) => "ccx",
        }
    }

    /// Builds a gate from its OpenQASM name, parameters and qubits.
    pub fn from_parts(name: &str, params: &[f64], qubits: &[usize]) -> Result<Gate> {
        let arity = |k: usize, p: usize| -> Result<()> {
            if qubits.len() != k || params.len() != p {
                Err(Error::Unsupported(alloc::format!("{name} takes {p} parameter(s) and {k} qubit(s)")))
            } else {
                Ok(())
            }
        };
        let g = match name {
            "id" | "h" | "x" | "y" | "z" | "s" | "sdg" | "t" | "tdg" | "sx" | "sxdg" => {
                arity(1, 0)?;
                let q = qubits[0];
                match name {
                    "id" => Gate::I(q),
                    "h" => Gate::H(q),
                    "x" => Gate::X(q),
                    "y" => Gate::Y(q),
                    "z" => Gate::Z(q),
                    "s" => Gate::S(q),
                    "sdg" => Gate::Sdg(q),
                    "t" => Gate::T(q),
                    "tdg" => Gate::Tdg(q),
                    "sx" => Gate::Sx(q),
                    _ => Gate::Sxdg(q),
                }
            }
            "rx" | "ry" | "rz" => {
                arity(1, 1)?;
                match name {
                    "rx" => Gate::Rx(qubits[0], params[0]),
                    "ry" => Gate::Ry(qubits[0], params[0]),
                    _ => Gate::Rz(qubits[0], params[0]),
                }
            }
            "cx" | "cy" | "cz" => {
                arity(2, 0)?;
                match name {
                    "cx" => Gate::Cx(qubits[0], qubits[1]),
                    "cy" => Gate::Cy(qubits[0], qubits[1]),
                    _ => Gate::Cz(qubits[0], qubits[1]),
                }
            }
            "ccx" => {
                arity(3, 0)?;
                Gate::Ccx(qubits[0], qubits[1], qubits[2])
            }
            _ => return Err(Error::Unsupported(alloc::format!("gate {name:?}"))),
        };
        Ok(g)
    }

    pub fn qubits(&self) -> Qubits {
        let (buf, len) = match *self {
            Gate::I(q)
            | Gate::H(q)
            | Gate::X(q)
            | Gate::Y(q)
            | Gate::Z(q)
            | Gate::S(q)
            | Gate::Sdg(q)
            | Gate::T(q)
            | Gate::Tdg(q)
            | Gate::Sx(q)
            | Gate::Sxdg(q)
            | Gate::Rx(q, _)
            | Gate::Ry(q, _)
            | Gate::Rz(q, _) => ([q, 0, 0], 1),
            Gate::Cx(a, b) | Gate::Cy(a, b) | Gate::Cz(a, b) => ([a, b, 0], 2),
            Gate::Ccx(a, b, t) => ([a, b, t], 3),
        };
        Qubits { buf, len }
    }

    pub fn param(&self) -> Option<f64> {
        match *self {
            Gate::Rx(_, t) | Gate::Ry(_, t) | Gate::Rz(_, t) => Some(t),
            _ => None,
        }
    }

    /// The same gate with its qubits replaced, in argument order.
    pub fn remapped(&self, map: impl Fn(usize) -> usize) -> Gate {
        match *self {
            Gate::I(q) => Gate::I(map(q)),
            Gate::H(q) => Gate::H(map(q)),
            Gate::X(q) => Gate::X(map(q)),
            Gate::Y(q) => Gate::Y(map(q)),
            Gate::Z(q) => Gate::Z(map(q)),
            Gate::S(q) => Gate::S(map(q)),
            Gate::Sdg(q) => Gate::Sdg(map(q)),
            Gate::T(q) => Gate::T(map(q)),
            Gate::Tdg(q) => Gate::Tdg(map(q)),
            Gate::Sx(q) => Gate::Sx(map(q)),
            Gate::Sxdg(q) => Gate::Sxdg(map(q)),
            Gate::Rx(q, t) => Gate::Rx(map(q), t),
            Gate::Ry(q, t) => Gate::Ry(map(q), t),
            Gate::Rz(q, t) => Gate::Rz(map(q), t),
            Gate::Cx(a, b) => Gate::Cx(map(a), map(b)),
            Gate::Cy(a, b) => Gate::Cy(map(a), map(b)),
            Gate::Cz(a, b) => Gate::Cz(map(a), map(b)),
            Gate::Ccx(a, b, t) => Gate::Ccx(map(a), map(b), map(t)),
        }
    }

    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::S(q) => Gate::Sdg(q),
            Gate::Sdg(q) => Gate::S(q),
            Gate::T(q) => Gate::Tdg(q),
            Gate::Tdg(q) => Gate::T(q),
            Gate::Sx(q) => Gate::Sxdg(q),
            Gate::Sxdg(q) => Gate::Sx(q),
            Gate::Rx(q, t) => Gate::Rx(q, -t),
            Gate::Ry(q, t) => Gate::Ry(q, -t),
            Gate::Rz(q, t) => Gate::Rz(q, -t),
            g => g,
        }
    }

    /// Checks indices against the register size and for repeats.
    pub fn validate(&self, n: usize) -> Result<()> {
        let qs = self.qubits();
        for (k, &q) in qs.iter().enumerate() {
            if q >= n {
                return Err(Error::QubitOutOfRange { index: q, n });
            }
            if qs[..k].contains(&q) {
                return Err(Error::RepeatedQubit(q));
            }
        }
        if let Some(t) = self.param() {
            if !t.is_finite() {
                return Err(Error::Unsupported(alloc::format!("non-finite angle {t}")));
            }
        }
        Ok(())
    }

    /// Target-qubit unitary and the controls that must all read 1.
    ///
    /// `Cz` is returned as a Z on its second qubit controlled by the first.
    pub fn kernel(&self) -> (usize, [[C64; 2]; 2], Qubits) {
        let none = Qubits { buf: [0; 3], len: 0 };
        let one = |a: usize| Qubits { buf: [a, 0, 0], len: 1 };
        match *self {
            Gate::Cx(a, b) => (b, single_matrix(&Gate::X(0)), one(a)),
            Gate::Cy(a, b) => (b, single_matrix(&Gate::Y(0)), one(a)),
            Gate::Cz(a, b) => (b, single_matrix(&Gate::Z(0)), one(a)),
            Gate::Ccx(a, b, t) => (t, single_matrix(&Gate::X(0)), Qubits { buf: [a, b, 0], len: 2 }),
            g => (g.qubits()[0], single_matrix(&g), none),
        }
    }
}

/// Matrix of a single-qubit gate, row-major. Panics on multi-qubit gates.
pub fn single_matrix(g: &Gate) -> [[C64; 2]; 2] {
    let o = c(0.0, 0.0);
    let l = c(1.0, 0.0);
    let h = c(FRAC_1_SQRT_2, 0.0);
    let half = |t: f64| (libm::cos(t / 2.0), libm::sin(t / 2.0));
    match *g {
        Gate::I(_) => [[l, o], [o, l]],
        Gate::H(_) => [[h, h], [h, -h]],
        Gate::X(_) => [[o, l], [l, o]],
        Gate::Y(_) => [[o, c(0.0, -1.0)], [c(0.0, 1.0), o]],
        Gate::Z(_) => [[l, o], [o, -l]],
        Gate::S(_) => [[l, o], [o, c(0.0, 1.0)]],
        Gate::Sdg(_) => [[l, o], [o, c(0.0, -1.0)]],
        Gate::T(_) => [[l, o], [o, cis(core::f64::consts::FRAC_PI_4)]],
        Gate::Tdg(_) => [[l, o], [o, cis(-core::f64::consts::FRAC_PI_4)]],
        Gate::Sx(_) => [[c(0.5, 0.5), c(0.5, -0.5)], [c(0.5, -0.5), c(0.5, 0.5)]],
        Gate::Sxdg(_) => [[c(0.5, -0.5), c(0.5, 0.5)], [c(0.5, 0.5), c(0.5, -0.5)]],
        Gate::Rx(_, t) => {
            let (co, si) = half(t);
            [[c(co, 0.0), c(0.0, -si)], [c(0.0, -si), c(co, 0.0)]]
        }
        Gate::Ry(_, t) => {
            let (co, si) = half(t);
            [[c(co, 0.0), c(-si, 0.0)], [c(si, 0.0), c(co, 0.0)]]
        }
        Gate::Rz(_, t) => [[cis(-t / 2.0), o], [o, cis(t / 2.0)]],
        _ => panic!("{} is not a single-qubit gate", g.name()),
    }
}
