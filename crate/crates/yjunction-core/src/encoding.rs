//! The two Y-junction encodings: one logical qubit on four physical qubits
//! (`Y1`) and two logical qubits on ten (`Y2`).

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix};
use crate::pauli::{string_expectation, Letter, PauliString, PauliSum};
use crate::statevector::StateVector;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EncodingId {
    Y1,
    Y2,
}

impl EncodingId {
    pub fn physical_qubits(self) -> usize {
        match self {
            EncodingId::Y1 => 4,
            EncodingId::Y2 => 10,
        }
    }

    pub fn logical_qubits(self) -> usize {
        match self {
            EncodingId::Y1 => 1,
            EncodingId::Y2 => 2,
        }
    }

    /// Logical Hilbert-space dimension.
    pub fn dim(self) -> usize {
        1 << self.logical_qubits()
    }
}

impl fmt::Display for EncodingId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EncodingId::Y1 => "Y1",
            EncodingId::Y2 => "Y2",
        })
    }
}

impl FromStr for EncodingId {
    type Err = Error;
    fn from_str(s: &str) -> Result<EncodingId> {
        match s.to_ascii_lowercase().as_str() {
            "y1" => Ok(EncodingId::Y1),
            "y2" => Ok(EncodingId::Y2),
            _ => Err(Error::UnknownLabel(s.to_string())),
        }
    }
}

/// Single-qubit preparation labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Zero,
    One,
    /// `(|0⟩ + |1⟩)/√2`
    Plus,
    /// `(|0⟩ + i|1⟩)/√2`
    IPlus,
}

impl Label {
    /// The tomographically complete input set, in table order.
    pub const ALL: [Label; 4] = [Label::Zero, Label::One, Label::Plus, Label::IPlus];

    /// Amplitudes `(α, β)` of `α|0⟩ + β|1⟩`.
    pub fn amplitudes(self) -> (C64, C64) {
        let r = core::f64::consts::FRAC_1_SQRT_2;
        match self {
            Label::Zero => (c(1.0, 0.0), c(0.0, 0.0)),
            Label::One => (c(0.0, 0.0), c(1.0, 0.0)),
            Label::Plus => (c(r, 0.0), c(r, 0.0)),
            Label::IPlus => (c(r, 0.0), c(0.0, r)),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Zero => "0",
            Label::One => "1",
            Label::Plus => "+",
            Label::IPlus => "i+",
        })
    }
}

impl FromStr for Label {
    type Err = Error;
    fn from_str(s: &str) -> Result<Label> {
        match s.trim() {
            "0" => Ok(Label::Zero),
            "1" => Ok(Label::One),
            "+" => Ok(Label::Plus),
            "i+" | "i" | "+i" => Ok(Label::IPlus),
            other => Err(Error::UnknownLabel(other.to_string())),
        }
    }
}

/// Parses `"+"`, `"0,1"` or `"0 i+"` into a label tuple.
pub fn parse_labels(s: &str) -> Result<Vec<Label>> {
    s.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).map(str::parse).collect()
}

pub fn labels_to_string(labels: &[Label]) -> String {
    labels.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",")
}

/// The eigenvalue a gauge operator takes on the code space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expected {
    /// Fixed on the whole code space.
    Fixed(i8),
    /// Distinguishes the logical states of the given logical qubit:
    /// −1 on `|0⟩` and +1 on `|1⟩`.
    Label(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaugeOp {
    pub name: &'static str,
    pub op: PauliString,
    pub expected: Expected,
}

/// A link variable `u^α_ij`; documentation only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GaugeLink {
    pub alpha: char,
    pub i: usize,
    pub j: usize,
    pub value: i8,
}

/// A centre qubit coupled to three arm qubits along z, y and x.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Junction {
    pub center: usize,
    pub z_arm: usize,
    pub y_arm: usize,
    pub x_arm: usize,
}

impl Junction {
    /// `Z_c Z_z cosθ + Y_c Y_y sinθ sinφ + X_c X_x sinθ cosφ`, with terms
    /// whose weight is below `1e−12` dropped so axis-aligned checks are
    /// single strings.
    pub fn hamiltonian(&self, n: usize, theta: f64, phi: f64) -> Result<PauliSum> {
        let (st, ct) = (libm::sin(theta), libm::cos(theta));
        let (sp, cp) = (libm::sin(phi), libm::cos(phi));
        let pair = |a: Letter, q: usize| PauliString::from_sparse(n, &[(self.center, a), (q, a)]);
        let mut terms = Vec::new();
        for (w, a, q) in
            [(ct, Letter::Z, self.z_arm), (st * sp, Letter::Y, self.y_arm), (st * cp, Letter::X, self.x_arm)]
        {
            if w.abs() > 1e-12 {
                terms.push((w, pair(a, q)?));
            }
        }
        PauliSum::new(n, terms)
    }

    pub fn qubits(&self) -> [usize; 4] {
        [self.center, self.z_arm, self.y_arm, self.x_arm]
    }

    /// The z-coupling `Z_c Z_z`, which is also the gauge-fixing operator.
    pub fn z_check(&self, n: usize) -> PauliString {
        PauliString::from_sparse(n, &[(self.center, Letter::Z), (self.z_arm, Letter::Z)])
            .expect("junction qubits are in range")
    }
}

#[derive(Debug, Clone)]
pub struct LogicalEncoding {
    id: EncodingId,
    zero: Vec<StateVector>,
    one: Vec<StateVector>,
    gauge_ops: Vec<GaugeOp>,
    logical_obs: Vec<[PauliString; 3]>,
    gauge_links: Vec<GaugeLink>,
    junction: Junction,
    recovery: PauliString,
}

/// Parses a printed ket: character `k` is the value of qubit `order[k]`.
fn ket_index(printed: &str, order: &[usize]) -> usize {
    printed.chars().zip(order).filter(|(ch, _)| *ch == '1').map(|(_, &q)| 1usize << q).sum()
}

fn ket(n: usize, order: &[usize], terms: &[(C64, &str)]) -> StateVector {
    let mut amps = vec![c(0.0, 0.0); 1 << n];
    for (a, printed) in terms {
        amps[ket_index(printed, order)] += *a;
    }
    StateVector::from_amplitudes(n, amps).expect("analytic states are nonzero")
}

fn ps(n: usize, spec: &[(usize, Letter)]) -> PauliString {
    PauliString::from_sparse(n, spec).expect("static operator tables are valid")
}

impl LogicalEncoding {
    pub fn new(id: EncodingId) -> LogicalEncoding {
        match id {
            EncodingId::Y1 => LogicalEncoding::y1(),
            EncodingId::Y2 => LogicalEncoding::y2(),
        }
    }

    /// Four physical qubits, one logical qubit.
    pub fn y1() -> LogicalEncoding {
        use Letter::*;
        let n = 4;
        let order = [0, 1, 2, 3];
        let h = 0.5;
        let zero =
            ket(n, &order, &[(c(h, 0.0), "0101"), (c(h, 0.0), "1010"), (c(0.0, h), "0110"), (c(0.0, h), "1001")]);
        let one =
            ket(n, &order, &[(c(h, 0.0), "0100"), (c(h, 0.0), "1011"), (c(0.0, -h), "0111"), (c(0.0, -h), "1000")]);
        let gauge_ops = vec![
            GaugeOp { name: "W1", op: ps(n, &[(0, Z), (2, X), (3, Y)]), expected: Expected::Fixed(-1) },
            // W2 equals n on the code space: the logical X below anticommutes
            // with it, so it cannot be fixed on both logical states.
            GaugeOp { name: "W2", op: ps(n, &[(0, X), (1, Y), (2, Z)]), expected: Expected::Label(0) },
            GaugeOp { name: "h", op: ps(n, &[(0, Z), (1, Z)]), expected: Expected::Fixed(-1) },
            GaugeOp { name: "n", op: ps(n, &[(2, Z), (3, Z)]), expected: Expected::Label(0) },
            GaugeOp { name: "W3", op: ps(n, &[(0, Y), (1, X), (3, Z)]), expected: Expected::Fixed(-1) },
        ];
        let logical_obs = vec![[ps(n, &[(2, Y), (3, Z)]), ps(n, &[(2, X)]), ps(n, &[(2, Z), (3, Z)]).negated()]];
        let gauge_links = vec![
            GaugeLink { alpha: 'z', i: 0, j: 1, value: -1 },
            GaugeLink { alpha: 'y', i: 0, j: 2, value: -1 },
            GaugeLink { alpha: 'x', i: 0, j: 3, value: -1 },
            GaugeLink { alpha: 'z', i: 2, j: 3, value: -1 },
        ];
        let junction = Junction { center: 0, z_arm: 1, y_arm: 2, x_arm: 3 };
        LogicalEncoding::assemble(EncodingId::Y1, vec![zero], vec![one], gauge_ops, logical_obs, gauge_links, junction)
    }

    /// Ten physical qubits, two logical qubits: `Q̃0` on qubits 0–5 and
    /// `Q̃1` on qubits 6–9; gates act through the ancilla junction centred
    /// on qubit 5.
    pub fn y2() -> LogicalEncoding {
        use Letter::*;
        let n = 10;
        let s = core::f64::consts::SQRT_2 / 4.0;
        let q0_order = [0, 1, 2, 3, 4, 5];
        let q0_zero = ket(
            6,
            &q0_order,
            &[
                (c(s, 0.0), "010101"),
                (c(s, 0.0), "010110"),
                (c(s, 0.0), "101001"),
                (c(s, 0.0), "101010"),
                (c(0.0, s), "011001"),
                (c(0.0, s), "011010"),
                (c(0.0, s), "100101"),
                (c(0.0, s), "100110"),
            ],
        );
        let q0_one = ket(
            6,
            &q0_order,
            &[
                (c(-s, 0.0), "011101"),
                (c(s, 0.0), "011110"),
                (c(-s, 0.0), "100001"),
                (c(s, 0.0), "100010"),
                (c(0.0, -s), "010001"),
                (c(0.0, s), "010010"),
                (c(0.0, -s), "101101"),
                (c(0.0, s), "101110"),
            ],
        );
        // Q̃1 kets list qubits 8, 7, 6, 9 (local 2, 1, 0, 3).
        let q1_order = [2, 1, 0, 3];
        let q1_zero =
            ket(4, &q1_order, &[(c(s, s), "0110"), (c(s, s), "1001"), (c(s, -s), "0101"), (c(s, -s), "1010")]);
        let q1_one =
            ket(4, &q1_order, &[(c(-s, s), "0100"), (c(-s, -s), "0111"), (c(s, s), "1000"), (c(s, -s), "1011")]);
        let gauge_ops = vec![
            GaugeOp { name: "W1", op: ps(n, &[(0, Y), (1, X), (3, Z)]), expected: Expected::Fixed(-1) },
            GaugeOp { name: "W2", op: ps(n, &[(0, Z), (2, X), (3, Y)]), expected: Expected::Fixed(-1) },
            GaugeOp { name: "W3", op: ps(n, &[(7, X), (8, Y), (9, Z)]), expected: Expected::Fixed(-1) },
            GaugeOp { name: "W4", op: ps(n, &[(6, Y), (7, Z), (9, X)]), expected: Expected::Fixed(-1) },
            GaugeOp { name: "W5", op: ps(n, &[(0, X), (1, Y), (2, Z), (4, Y), (5, Y)]), expected: Expected::Fixed(-1) },
            GaugeOp { name: "hQ0", op: ps(n, &[(0, Z), (1, Z)]), expected: Expected::Fixed(-1) },
            GaugeOp { name: "hQ1", op: ps(n, &[(8, Z), (7, Z)]), expected: Expected::Fixed(-1) },
            GaugeOp { name: "hA", op: ps(n, &[(4, Z), (5, Z)]), expected: Expected::Fixed(-1) },
            GaugeOp { name: "nQ0", op: ps(n, &[(2, Z), (3, Z)]), expected: Expected::Label(0) },
            GaugeOp { name: "nQ1", op: ps(n, &[(6, Z), (9, Z)]), expected: Expected::Label(1) },
        ];
        let logical_obs = vec![
            [ps(n, &[(2, X), (5, Z)]), ps(n, &[(2, Y), (3, Z), (5, Z)]).negated(), ps(n, &[(2, Z), (3, Z)]).negated()],
            [ps(n, &[(6, Y)]).negated(), ps(n, &[(6, X), (9, Z)]).negated(), ps(n, &[(6, Z), (9, Z)]).negated()],
        ];
        let junction = Junction { center: 5, z_arm: 4, y_arm: 6, x_arm: 2 };
        LogicalEncoding::assemble(
            EncodingId::Y2,
            vec![q0_zero, q1_zero],
            vec![q0_one, q1_one],
            gauge_ops,
            logical_obs,
            Vec::new(),
            junction,
        )
    }

    fn assemble(
        id: EncodingId,
        zero: Vec<StateVector>,
        one: Vec<StateVector>,
        gauge_ops: Vec<GaugeOp>,
        logical_obs: Vec<[PauliString; 3]>,
        gauge_links: Vec<GaugeLink>,
        junction: Junction,
    ) -> LogicalEncoding {
        let mut enc = LogicalEncoding {
            id,
            zero,
            one,
            gauge_ops,
            logical_obs,
            gauge_links,
            junction,
            recovery: PauliString::identity(id.physical_qubits()),
        };
        enc.recovery = enc.find_recovery().expect("every encoding has a sector recovery");
        enc
    }

    pub fn id(&self) -> EncodingId {
        self.id
    }

    pub fn physical_qubits(&self) -> usize {
        self.id.physical_qubits()
    }

    pub fn logical_qubits(&self) -> usize {
        self.id.logical_qubits()
    }

    pub fn dim(&self) -> usize {
        self.id.dim()
    }

    pub fn gauge_ops(&self) -> &[GaugeOp] {
        &self.gauge_ops
    }

    pub fn gauge_links(&self) -> &[GaugeLink] {
        &self.gauge_links
    }

    pub fn junction(&self) -> Junction {
        self.junction
    }

    /// Pauli that returns a state from the flipped-gauge sector (the
    /// junction's z-check reading +1) to the code space without touching
    /// any logical observable.
    pub fn recovery(&self) -> PauliString {
        self.recovery
    }

    /// Index of the gauge operator measured by the junction's z-check.
    pub fn gauge_check_index(&self) -> usize {
        let zc = self.junction.z_check(self.physical_qubits());
        self.gauge_ops.iter().position(|g| g.op == zc).expect("z-check is a gauge operator")
    }

    fn find_recovery(&self) -> Option<PauliString> {
        let n = self.physical_qubits();
        let flip = self.gauge_check_index();
        let qs = self.junction.qubits();
        let mut candidates: Vec<PauliString> = (1u32..256)
            .map(|code| {
                let spec: Vec<(usize, Letter)> =
                    (0..4).map(|k| (qs[k], Letter::ALL[(code >> (2 * k) & 3) as usize])).collect();
                ps(n, &spec)
            })
            .collect();
        candidates.sort_by_key(|p| (p.weight(), p.letters_string()));
        candidates.into_iter().find(|r| {
            let fixed_ok = self.gauge_ops.iter().enumerate().all(|(k, g)| match g.expected {
                Expected::Fixed(_) => r.commutes(&g.op).unwrap() == (k != flip),
                Expected::Label(_) => true,
            });
            let logical_ok = self.logical_obs.iter().flatten().all(|o| r.commutes(o).unwrap());
            fixed_ok && logical_ok
        })
    }

    /// Signed Hermitian observable for `axis` (0 = X, 1 = Y, 2 = Z) of a
    /// logical qubit.
    pub fn logical_observable(&self, qubit: usize, axis: usize) -> Result<PauliString> {
        if qubit >= self.logical_qubits() {
            return Err(Error::QubitOutOfRange { index: qubit, n: self.logical_qubits() });
        }
        if axis > 2 {
            return Err(Error::QubitOutOfRange { index: axis, n: 3 });
        }
        Ok(self.logical_obs[qubit][axis])
    }

    /// Physical operator for a logical Pauli string (one letter per logical
    /// qubit, qubit 0 first).
    pub fn physical_pauli(&self, logical: &PauliString) -> Result<PauliString> {
        if logical.n() != self.logical_qubits() {
            return Err(Error::LengthMismatch(self.logical_qubits(), logical.n()));
        }
        let mut out = PauliString::identity(self.physical_qubits()).with_phase(logical.phase());
        for (q, l) in logical.letters().into_iter().enumerate() {
            let axis = match l {
                Letter::I => continue,
                Letter::X => 0,
                Letter::Y => 1,
                Letter::Z => 2,
            };
            out = out.mul(&self.logical_obs[q][axis])?;
        }
        Ok(out)
    }

    /// Analytic state for a label tuple (one label per logical qubit).
    pub fn basis_state(&self, labels: &[Label]) -> Result<StateVector> {
        if labels.len() != self.logical_qubits() {
            return Err(Error::LabelCount { expected: self.logical_qubits(), got: labels.len() });
        }
        let mut blocks = Vec::with_capacity(labels.len());
        for (q, l) in labels.iter().enumerate() {
            let (a, b) = l.amplitudes();
            let amps = self.zero[q].amps().iter().zip(self.one[q].amps()).map(|(z, o)| a * z + b * o).collect();
            blocks.push(StateVector::from_amplitudes(self.zero[q].n(), amps)?);
        }
        let mut state = blocks[0].clone();
        for b in &blocks[1..] {
            state = StateVector::tensor(&state, b)?;
        }
        Ok(state)
    }

    /// Logical computational basis, index `Σ aₖ 2ᵏ` with logical qubit 0
    /// least significant.
    pub fn computational_basis(&self) -> Vec<StateVector> {
        (0..self.dim())
            .map(|i| {
                let labels: Vec<Label> = (0..self.logical_qubits())
                    .map(|q| if i >> q & 1 == 1 { Label::One } else { Label::Zero })
                    .collect();
                self.basis_state(&labels).expect("label count matches")
            })
            .collect()
    }

    /// Coordinates `⟨a_L|ψ⟩` of a physical state in the logical basis.
    pub fn logical_coordinates(&self, state: &StateVector) -> Result<Vec<C64>> {
        self.computational_basis().iter().map(|b| b.overlap(state)).collect()
    }

    /// Matrix of a logical Pauli string in the logical computational basis.
    pub fn logical_matrix(logical: &PauliString) -> CMatrix {
        let mut m = CMatrix::identity(1, 1);
        for l in logical.letters() {
            let p = l.matrix();
            let pm = CMatrix::from_row_slice(2, 2, &[p[0][0], p[0][1], p[1][0], p[1][1]]);
            m = crate::linalg::kron(&pm, &m);
        }
        m * logical.phase().to_complex()
    }
}

/// One gauge-operator reading of [`check_codespace`].
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeReading {
    pub name: &'static str,
    pub op: PauliString,
    pub expectation: f64,
    pub expected: Expected,
    /// Set when a fixed operator misses its eigenvalue by more than `1e−9`.
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CodespaceReport {
    pub readings: Vec<GaugeReading>,
}

impl CodespaceReport {
    pub fn in_codespace(&self) -> bool {
        self.readings.iter().all(|r| !r.flagged)
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.readings.iter().find(|r| r.name == name).map(|r| r.expectation)
    }

    pub fn summary(&self) -> String {
        self.readings
            .iter()
            .map(|r| format!("{}={:+.6}{}", r.name, r.expectation, if r.flagged { "!" } else { "" }))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Expectation of every gauge operator; fixed operators off their
/// eigenvalue by more than `1e−9` are flagged.
pub fn check_codespace(state: &StateVector, enc: &LogicalEncoding) -> Result<CodespaceReport> {
    if state.n() != enc.physical_qubits() {
        return Err(Error::LengthMismatch(enc.physical_qubits(), state.n()));
    }
    let mut readings = Vec::with_capacity(enc.gauge_ops.len());
    for g in &enc.gauge_ops {
        let e = string_expectation(state, &g.op)?;
        let flagged = match g.expected {
            Expected::Fixed(v) => (e - f64::from(v)).abs() > 1e-9,
            Expected::Label(_) => false,
        };
        readings.push(GaugeReading { name: g.name, op: g.op, expectation: e, expected: g.expected, flagged });
    }
    Ok(CodespaceReport { readings })
}

pub fn build_logical_state(id: EncodingId, labels: &[Label]) -> Result<StateVector> {
    LogicalEncoding::new(id).basis_state(labels)
}
