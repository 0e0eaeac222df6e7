//! Gate-level circuits: state preparation, parity-check fragments and the
//! full gate protocols, plus a small trajectory simulator.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};
use core::fmt;
use core::str::FromStr;

use rand::Rng;

use crate::encoding::{EncodingId, Junction, Label};
use crate::error::{parse_err, Error, Result};
use crate::gate::Gate;
use crate::linalg::CMatrix;
use crate::pauli::{Letter, PauliString};
use crate::protocol::{GateId, GateProtocol, MeasurementAxis};
use crate::statevector::StateVector;
use crate::ZERO_PROBABILITY;

/// Single-qubit measurement basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    X,
    Y,
    Z,
}

impl Basis {
    pub fn letter(self) -> Letter {
        match self {
            Basis::X => Letter::X,
            Basis::Y => Letter::Y,
            Basis::Z => Letter::Z,
        }
    }

    pub fn from_letter(l: Letter) -> Option<Basis> {
        match l {
            Letter::X => Some(Basis::X),
            Letter::Y => Some(Basis::Y),
            Letter::Z => Some(Basis::Z),
            Letter::I => None,
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter().as_char())
    }
}

impl FromStr for Basis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Basis> {
        match s.trim().to_ascii_lowercase().as_str() {
            "x" => Ok(Basis::X),
            "y" => Ok(Basis::Y),
            "z" => Ok(Basis::Z),
            _ => Err(parse_err("basis", s)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Op {
    Gate(Gate),
    /// Non-destructive single-qubit measurement; the bit is 1 for eigenvalue −1.
    Measure {
        qubit: usize,
        basis: Basis,
        clbit: usize,
    },
    Barrier,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    pub n_qubits: usize,
    pub n_clbits: usize,
    pub ops: Vec<Op>,
}

impl Circuit {
    pub fn new(n_qubits: usize, n_clbits: usize) -> Circuit {
        Circuit { n_qubits, n_clbits, ops: Vec::new() }
    }

    pub fn push(&mut self, g: Gate) -> &mut Circuit {
        self.ops.push(Op::Gate(g));
        self
    }

    pub fn extend_gates(&mut self, gates: impl IntoIterator<Item = Gate>) -> &mut Circuit {
        self.ops.extend(gates.into_iter().map(Op::Gate));
        self
    }

    pub fn measure(&mut self, qubit: usize, basis: Basis, clbit: usize) -> &mut Circuit {
        self.ops.push(Op::Measure { qubit, basis, clbit });
        self
    }

    pub fn barrier(&mut self) -> &mut Circuit {
        self.ops.push(Op::Barrier);
        self
    }

    /// Appends `other`, growing the registers as needed.
    pub fn append(&mut self, other: &Circuit) -> &mut Circuit {
        self.n_qubits = self.n_qubits.max(other.n_qubits);
        self.n_clbits = self.n_clbits.max(other.n_clbits);
        self.ops.extend_from_slice(&other.ops);
        self
    }

    pub fn gates(&self) -> impl Iterator<Item = &Gate> {
        self.ops.iter().filter_map(|o| match o {
            Op::Gate(g) => Some(g),
            _ => None,
        })
    }

    pub fn gate_count(&self) -> usize {
        self.gates().count()
    }

    pub fn measurement_count(&self) -> usize {
        self.ops.iter().filter(|o| matches!(o, Op::Measure { .. })).count()
    }

    /// Two-qubit gate count, with a Toffoli counted as one.
    pub fn entangling_count(&self) -> usize {
        self.gates().filter(|g| g.qubits().len() > 1).count()
    }

    /// Circuit depth counting every gate and measurement as one layer on
    /// its qubits. Barriers synchronize all qubits.
    pub fn depth(&self) -> usize {
        let mut front = vec![0usize; self.n_qubits];
        for op in &self.ops {
            match op {
                Op::Gate(g) => {
                    let qs = g.qubits();
                    let layer = qs.iter().map(|&q| front[q]).max().unwrap_or(0) + 1;
                    for &q in qs.iter() {
                        front[q] = layer;
                    }
                }
                Op::Measure { qubit, .. } => front[*qubit] += 1,
                Op::Barrier => {
                    let m = front.iter().copied().max().unwrap_or(0);
                    front.iter_mut().for_each(|f| *f = m);
                }
            }
        }
        front.into_iter().max().unwrap_or(0)
    }

    pub fn validate(&self) -> Result<()> {
        for op in &self.ops {
            match op {
                Op::Gate(g) => g.validate(self.n_qubits)?,
                Op::Measure { qubit, clbit, .. } => {
                    if *qubit >= self.n_qubits {
                        return Err(Error::QubitOutOfRange { index: *qubit, n: self.n_qubits });
                    }
                    if *clbit >= self.n_clbits {
                        return Err(Error::QubitOutOfRange { index: *clbit, n: self.n_clbits });
                    }
                }
                Op::Barrier => {}
            }
        }
        Ok(())
    }
}

/// Hooks for error channels around circuit operations.
///
/// `index` is the position of the operation in [`Circuit::ops`].
pub trait Channel {
    fn after_gate(&mut self, _index: usize, _gate: &Gate, _state: &mut StateVector) {}
    /// Called once per measurement, before it happens.
    fn before_measure(&mut self, _index: usize, _qubit: usize, _state: &mut StateVector) {}
    /// Maps the recorded bit, for readout errors.
    fn readout(&mut self, _index: usize, bit: u8) -> u8 {
        bit
    }
}

/// The noiseless channel.
#[derive(Debug, Clone, Copy, Default)]
pub struct Ideal;

impl Channel for Ideal {}

/// Where measurement outcomes come from.
pub enum Sampling<'a, R: Rng + ?Sized> {
    Born(&'a mut R),
    /// Force every classical bit to the value at its index. The returned
    /// weight is the product of Born probabilities.
    Forced(&'a [u8]),
}

#[derive(Debug, Clone)]
pub struct CircuitRun {
    pub state: StateVector,
    /// Classical register as recorded, after any readout error.
    pub clbits: Vec<u8>,
    /// Born probability of the (pre-readout) outcomes.
    pub probability: f64,
}

fn rotate_into_z(state: &mut StateVector, q: usize, basis: Basis) -> Result<()> {
    match basis {
        Basis::X => state.apply_gate(&Gate::H(q)),
        Basis::Y => {
            state.apply_gate(&Gate::Sdg(q))?;
            state.apply_gate(&Gate::H(q))
        }
        Basis::Z => Ok(()),
    }
}

fn rotate_back(state: &mut StateVector, q: usize, basis: Basis) -> Result<()> {
    match basis {
        Basis::X => state.apply_gate(&Gate::H(q)),
        Basis::Y => {
            state.apply_gate(&Gate::H(q))?;
            state.apply_gate(&Gate::S(q))
        }
        Basis::Z => Ok(()),
    }
}

/// Runs `circuit` on `input`.
pub fn simulate<R: Rng + ?Sized, C: Channel + ?Sized>(
    circuit: &Circuit,
    input: &StateVector,
    mut sampling: Sampling<'_, R>,
    channel: &mut C,
) -> Result<CircuitRun> {
    circuit.validate()?;
    if input.n() != circuit.n_qubits {
        return Err(Error::LengthMismatch(circuit.n_qubits, input.n()));
    }
    if let Sampling::Forced(bits) = &sampling {
        if bits.len() != circuit.n_clbits {
            return Err(Error::LengthMismatch(circuit.n_clbits, bits.len()));
        }
    }
    let mut state = input.clone();
    let mut clbits = vec![0u8; circuit.n_clbits];
    let mut probability = 1.0;
    for (index, op) in circuit.ops.iter().enumerate() {
        match *op {
            Op::Gate(g) => {
                state.apply_gate(&g)?;
                channel.after_gate(index, &g, &mut state);
            }
            Op::Measure { qubit, basis, clbit } => {
                channel.before_measure(index, qubit, &mut state);
                rotate_into_z(&mut state, qubit, basis)?;
                let p1 = state.prob_one(qubit).clamp(0.0, 1.0);
                let bit = match &mut sampling {
                    Sampling::Born(rng) => u8::from(rng.random::<f64>() < p1),
                    Sampling::Forced(bits) => bits[clbit] & 1,
                };
                let p = if bit == 1 { p1 } else { 1.0 - p1 };
                if p <= ZERO_PROBABILITY {
                    return Err(Error::ZeroProbability(p));
                }
                state.collapse_qubit(qubit, bit, p);
                probability *= p;
                rotate_back(&mut state, qubit, basis)?;
                clbits[clbit] = channel.readout(index, bit);
            }
            Op::Barrier => {}
        }
    }
    Ok(CircuitRun { state, clbits, probability })
}

/// Runs only the unitary part, ignoring measurements and barriers.
pub fn run_unitary(circuit: &Circuit, input: &StateVector) -> Result<StateVector> {
    let mut s = input.clone();
    for g in circuit.gates() {
        s.apply_gate(g)?;
    }
    Ok(s)
}

use Gate::{Cx, Cy, Cz, Rx, Ry, Sdg, Sx, H, S, X, Y, Z};

/// Preparation circuit for a logical product state, starting from all
/// zeros.
pub fn init_circuit(id: EncodingId, labels: &[Label]) -> Result<Circuit> {
    if labels.len() != id.logical_qubits() {
        return Err(Error::LabelCount { expected: id.logical_qubits(), got: labels.len() });
    }
    let mut c = Circuit::new(id.physical_qubits(), 0);
    match id {
        EncodingId::Y1 => {
            c.extend_gates(y1_init(labels[0]));
        }
        EncodingId::Y2 => {
            c.extend_gates(q0_init(labels[0]));
            c.extend_gates(q1_init(labels[1]).into_iter().map(|g| g.remapped(|q| q + 6)));
        }
    }
    Ok(c)
}

fn y1_init(label: Label) -> Vec<Gate> {
    match label {
        Label::Zero => vec![Ry(2, FRAC_PI_2), Ry(1, -FRAC_PI_2), X(0), Cy(1, 0), Cx(2, 0), Cx(2, 1), Cx(2, 3), X(2)],
        Label::One => vec![H(2), X(1), Rx(0, FRAC_PI_2), Cx(0, 3), Cx(2, 0), Cx(0, 1), Cx(0, 3)],
        Label::Plus => vec![H(2), X(1), Rx(0, FRAC_PI_2), Cx(0, 3), Cx(2, 0), H(3), Cx(0, 1), Cz(2, 1)],
        Label::IPlus => vec![
            H(2),
            X(1),
            Rx(0, FRAC_PI_2),
            S(1),
            Cx(0, 3),
            H(3),
            Cx(2, 0),
            Sdg(3),
            Sdg(2),
            Cx(0, 1),
            Cz(1, 2),
            Cz(2, 3),
        ],
    }
}

fn q0_init(label: Label) -> Vec<Gate> {
    match label {
        Label::Zero => {
            vec![H(5), X(4), X(3), H(2), H(1), Cx(5, 4), Sdg(3), Cy(2, 3), Cx(1, 3), Cx(1, 2), Z(2), Cx(1, 0), Y(1)]
        }
        Label::One => vec![H(5), X(4), H(2), H(1), Z(5), Cy(2, 3), Cx(5, 4), Cx(1, 3), Cx(1, 2), Z(2), Cx(1, 0), Y(1)],
        Label::Plus => vec![
            H(5),
            X(4),
            H(3),
            H(2),
            H(1),
            Z(5),
            S(3),
            Cx(5, 4),
            Cy(2, 3),
            Cx(1, 3),
            Z(3),
            Cx(1, 2),
            Cz(5, 3),
            Cx(1, 0),
            Cz(5, 2),
            Y(1),
        ],
        Label::IPlus => vec![
            H(5),
            X(4),
            H(3),
            H(2),
            H(1),
            Z(5),
            Cy(2, 3),
            Cx(5, 4),
            Cx(1, 3),
            Z(3),
            Cx(1, 2),
            Cz(5, 3),
            Cx(1, 0),
            Cz(5, 2),
            Ry(1, -PI),
        ],
    }
}

/// Second logical qubit, on local indices 0..4.
fn q1_init(label: Label) -> Vec<Gate> {
    match label {
        Label::Zero => vec![X(3), X(2), H(1), Sx(0), Cx(0, 2), Cx(1, 0), Cx(0, 3), Cx(0, 2)],
        Label::One => vec![X(2), H(1), Sx(0), Cx(0, 2), Cx(1, 0), Cx(0, 3), Z(1), Cx(0, 2)],
        Label::Plus => vec![H(3), X(2), H(1), Sx(0), Cx(0, 2), Cy(1, 0), S(1), Cx(0, 3), Cx(0, 2), Cz(3, 1), Z(2)],
        Label::IPlus => {
            vec![H(3), X(2), H(1), Sx(0), Sdg(3), Cx(0, 2), Cy(1, 0), S(1), Cx(0, 3), Cx(0, 2), Cz(3, 1), Z(2)]
        }
    }
}

/// Clifford `U` on a junction with `U X_c U† = X_c X_x` and
/// `U Y_c U† = Y_c Y_y`, as a gate list in application order.
pub fn junction_clifford(j: &Junction) -> Vec<Gate> {
    vec![Cx(j.x_arm, j.center), H(j.x_arm), Cy(j.x_arm, j.y_arm), Cx(j.center, j.x_arm)]
}

fn inverse_gates(gates: &[Gate]) -> Vec<Gate> {
    gates.iter().rev().map(Gate::inverse).collect()
}

fn angle_is(a: f64, target: f64) -> bool {
    let d = libm::remainder(a - target, 2.0 * PI);
    d.abs() < 1e-12
}

/// `U_023(τ)`: the rotation `R_z(τ)` on the centre followed by
/// [`junction_clifford`], so that `U X_c U† = cosτ X_c X_x + sinτ Y_c Y_y`.
pub fn u023(j: &Junction, tau: f64) -> Vec<Gate> {
    let mut g = vec![Gate::Rz(j.center, tau)];
    g.extend(junction_clifford(j));
    g
}

/// Circuit fragment measuring one junction check onto `clbit`, using the
/// centre qubit as the readout.
///
/// The z-check and the pure x- and y-checks use a single two-qubit gate
/// around the readout. Any other equatorial axis is measured as `X_c`
/// conjugated by [`u023`]. Tilted axes (`0 < θ < π/2`) are not supported.
pub fn check_fragment(n_qubits: usize, axis: &MeasurementAxis, clbit: usize) -> Result<Circuit> {
    let j = axis.junction;
    let c_ = j.center;
    let mut c = Circuit::new(n_qubits, clbit + 1);
    if angle_is(axis.theta, 0.0) {
        c.push(Cx(j.z_arm, c_)).measure(c_, Basis::Z, clbit).push(Cx(j.z_arm, c_));
    } else if angle_is(axis.theta, FRAC_PI_2) {
        if angle_is(axis.phi, 0.0) {
            c.push(Cx(c_, j.x_arm)).measure(c_, Basis::X, clbit).push(Cx(c_, j.x_arm));
        } else if angle_is(axis.phi, FRAC_PI_2) {
            c.push(Cy(c_, j.y_arm)).measure(c_, Basis::Y, clbit).push(Cy(c_, j.y_arm));
        } else {
            let u = u023(&j, axis.phi);
            c.extend_gates(inverse_gates(&u));
            c.measure(c_, Basis::X, clbit);
            c.extend_gates(u);
        }
    } else {
        return Err(Error::Unsupported(alloc::format!("check fragment for θ = {} (only 0 and π/2)", axis.theta)));
    }
    Ok(c)
}

/// Preparation, a barrier, then one check fragment per measurement of the
/// protocol. Bit `k` of the classical register holds measurement `k`.
pub fn protocol_circuit(protocol: &GateProtocol, labels: &[Label]) -> Result<Circuit> {
    let enc = protocol.encoding();
    let n = enc.physical_qubits();
    let mut c = init_circuit(enc.id(), labels)?;
    c.n_clbits = protocol.axes().len();
    c.barrier();
    for (k, axis) in protocol.axes().iter().enumerate() {
        c.append(&check_fragment(n, axis, k)?);
    }
    Ok(c)
}

/// [`protocol_circuit`] for a named gate.
pub fn gate_circuit(gate: GateId, labels: &[Label]) -> Result<Circuit> {
    protocol_circuit(&GateProtocol::new(gate), labels)
}

/// Dense matrix of a gate list on `n` qubits.
pub fn unitary_matrix(n: usize, gates: &[Gate]) -> Result<CMatrix> {
    let d = 1usize << n;
    let mut m = CMatrix::zeros(d, d);
    for col in 0..d {
        let mut s = StateVector::basis(n, col)?;
        s.apply_gates(gates)?;
        for (row, a) in s.amps().iter().enumerate() {
            m[(row, col)] = *a;
        }
    }
    Ok(m)
}

/// Destructive single-qubit readout of a Pauli string's support, with
/// clbits starting at `first_clbit` in support order. The parity of the
/// recorded bits times the string's sign is the sampled eigenvalue.
pub fn pauli_readout(p: &PauliString, first_clbit: usize) -> Result<Vec<Op>> {
    if !p.is_hermitian() {
        return Err(Error::NonHermitian(alloc::format!("{p}")));
    }
    Ok(p.support()
        .into_iter()
        .enumerate()
        .map(|(k, q)| Op::Measure {
            qubit: q,
            basis: Basis::from_letter(p.letter(q)).expect("support letters are not I"),
            clbit: first_clbit + k,
        })
        .collect())
}

/// Short text form used in reports: `h q2; cx q0,q3; mx q5 -> c0; |`.
pub fn describe(circuit: &Circuit) -> String {
    use core::fmt::Write;
    let mut s = String::new();
    for op in &circuit.ops {
        match op {
            Op::Gate(g) => {
                let _ = write!(s, "{}", g.name());
                if let Some(t) = g.param() {
                    let _ = write!(s, "({t:.4})");
                }
                let qs: Vec<String> = g.qubits().iter().map(|q| alloc::format!("q{q}")).collect();
                let _ = write!(s, " {}; ", qs.join(","));
            }
            Op::Measure { qubit, basis, clbit } => {
                let _ = write!(s, "m{} q{qubit} -> c{clbit}; ", basis.letter().as_char().to_ascii_lowercase());
            }
            Op::Barrier => s.push_str("| "),
        }
    }
    s.trim_end().into()
}

/// One leaf of [`enumerate_branches`].
#[derive(Debug, Clone)]
pub struct CircuitBranch {
    /// Measurement outcomes by classical bit, before readout errors.
    pub clbits: Vec<u8>,
    pub probability: f64,
    pub state: StateVector,
}

/// Every measurement branch of `circuit` with probability above
/// [`ZERO_PROBABILITY`], found by forking the state at each measurement.
/// The channel's readout hook is not used.
pub fn enumerate_branches<C: Channel + ?Sized>(
    circuit: &Circuit,
    input: &StateVector,
    channel: &mut C,
) -> Result<Vec<CircuitBranch>> {
    circuit.validate()?;
    if input.n() != circuit.n_qubits {
        return Err(Error::LengthMismatch(circuit.n_qubits, input.n()));
    }
    let mut out = Vec::new();
    let root = CircuitBranch { clbits: vec![0; circuit.n_clbits], probability: 1.0, state: input.clone() };
    explore(circuit, 0, root, channel, &mut out)?;
    Ok(out)
}

fn explore<C: Channel + ?Sized>(
    circuit: &Circuit,
    start: usize,
    mut br: CircuitBranch,
    channel: &mut C,
    out: &mut Vec<CircuitBranch>,
) -> Result<()> {
    for index in start..circuit.ops.len() {
        match circuit.ops[index] {
            Op::Gate(g) => {
                br.state.apply_gate(&g)?;
                channel.after_gate(index, &g, &mut br.state);
            }
            Op::Measure { qubit, basis, clbit } => {
                channel.before_measure(index, qubit, &mut br.state);
                rotate_into_z(&mut br.state, qubit, basis)?;
                let p1 = br.state.prob_one(qubit).clamp(0.0, 1.0);
                for bit in [0u8, 1] {
                    let p = if bit == 1 { p1 } else { 1.0 - p1 };
                    if p * br.probability <= ZERO_PROBABILITY {
                        continue;
                    }
                    let mut child = br.clone();
                    child.state.collapse_qubit(qubit, bit, p);
                    rotate_back(&mut child.state, qubit, basis)?;
                    child.clbits[clbit] = bit;
                    child.probability *= p;
                    explore(circuit, index + 1, child, channel, out)?;
                }
                return Ok(());
            }
            Op::Barrier => {}
        }
    }
    out.push(br);
    Ok(())
}
