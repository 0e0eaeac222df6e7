//! Stochastic Pauli noise for circuit trajectories.
//!
//! Gates are followed by a uniformly random non-identity Pauli on their
//! qubits with the gate's error probability. Every measurement window gives
//! each other qubit an independent Z flip with the idle probability, and
//! every recorded ±1 value is flipped with the readout probability.
//!
//! Gate and idle faults never depend on the state, so a shot's fault
//! pattern can be drawn up front ([`sample_faults`]) and replayed with
//! [`FaultChannel`]. [`NoisyChannel`] draws the same faults on the fly.

use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::circuit::{Channel, Circuit, Op};
use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::pauli::{Letter, PauliString};
use crate::statevector::StateVector;

/// Error probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    /// Single-qubit gate depolarizing probability.
    pub p1: f64,
    /// Multi-qubit gate depolarizing probability.
    pub p2: f64,
    /// Readout flip probability.
    pub p_readout: f64,
    /// Z-flip probability per idle qubit per measurement window.
    pub p_idle: f64,
}

impl NoiseModel {
    pub const NONE: NoiseModel = NoiseModel { p1: 0.0, p2: 0.0, p_readout: 0.0, p_idle: 0.0 };

    /// `(1 − e^{−window/t}) / 2`, the dephasing flip probability of a
    /// window of length `window` against coherence time `t`.
    pub fn idle_from_times(window: f64, t: f64) -> f64 {
        (1.0 - libm::exp(-window / t)) / 2.0
    }

    pub fn validate(&self) -> Result<()> {
        for p in [self.p1, self.p2, self.p_readout, self.p_idle] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidProbability(p));
            }
        }
        Ok(())
    }

    pub fn is_noiseless(&self) -> bool {
        *self == NoiseModel::NONE
    }

    /// True when only readout errors are present.
    pub fn is_readout_only(&self) -> bool {
        self.p1 == 0.0 && self.p2 == 0.0 && self.p_idle == 0.0
    }

    pub fn gate_probability(&self, gate: &Gate) -> f64 {
        if gate.qubits().len() == 1 {
            self.p1
        } else {
            self.p2
        }
    }
}

impl Default for NoiseModel {
    /// Median calibration values of a superconducting device, with the
    /// idle term from a 1.56 µs readout window over a 134.13 µs coherence
    /// time.
    fn default() -> NoiseModel {
        NoiseModel {
            p1: 2.862e-4,
            p2: 3.671e-3,
            p_readout: 2.417e-2,
            p_idle: NoiseModel::idle_from_times(1.56, 134.13),
        }
    }
}

impl fmt::Display for NoiseModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p1={} p2={} p_ro={} p_idle={}", self.p1, self.p2, self.p_readout, self.p_idle)
    }
}

/// Uniformly random non-identity Pauli on `qubits`.
pub fn random_pauli<R: Rng + ?Sized>(n: usize, qubits: &[usize], rng: &mut R) -> PauliString {
    let k = qubits.len();
    let code = rng.random_range(1..(1u32 << (2 * k)));
    let spec: Vec<(usize, Letter)> =
        qubits.iter().enumerate().map(|(i, &q)| (q, Letter::ALL[(code >> (2 * i) & 3) as usize])).collect();
    PauliString::from_sparse(n, &spec).expect("gate qubits are in range")
}

/// With probability `p`, applies a random non-identity Pauli on `qubits`.
/// Returns whether a fault happened.
pub fn apply_gate_noise<R: Rng + ?Sized>(state: &mut StateVector, qubits: &[usize], p: f64, rng: &mut R) -> bool {
    if p > 0.0 && rng.random::<f64>() < p {
        let e = random_pauli(state.n(), qubits, rng);
        state.apply_pauli(&e).expect("sizes match");
        true
    } else {
        false
    }
}

/// Independent Z flips with probability `p` on each idle qubit. Returns the
/// number of flips.
pub fn apply_idle_noise<R: Rng + ?Sized>(state: &mut StateVector, idle: &[usize], p: f64, rng: &mut R) -> usize {
    let mut flips = 0;
    for &q in idle {
        if p > 0.0 && rng.random::<f64>() < p {
            state
                .apply_pauli(&PauliString::single(state.n(), q, Letter::Z).expect("qubit in range"))
                .expect("sizes match");
            flips += 1;
        }
    }
    flips
}

/// Flips a ±1 eigenvalue with probability `p`.
pub fn flip_readout<R: Rng + ?Sized>(eigenvalue: i8, p: f64, rng: &mut R) -> i8 {
    if p > 0.0 && rng.random::<f64>() < p {
        -eigenvalue
    } else {
        eigenvalue
    }
}

/// [`flip_readout`] on a 0/1 bit.
pub fn flip_bit<R: Rng + ?Sized>(bit: u8, p: f64, rng: &mut R) -> u8 {
    if p > 0.0 && rng.random::<f64>() < p {
        bit ^ 1
    } else {
        bit
    }
}

/// A Pauli inserted into a circuit: right after gate `op`, or right before
/// measurement `op`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fault {
    pub op: usize,
    pub pauli: PauliString,
}

/// Draws the gate and idle faults of one shot, in circuit order.
pub fn sample_faults<R: Rng + ?Sized>(circuit: &Circuit, model: &NoiseModel, rng: &mut R) -> Vec<Fault> {
    let n = circuit.n_qubits;
    let mut faults = Vec::new();
    for (op_index, op) in circuit.ops.iter().enumerate() {
        match op {
            Op::Gate(g) => {
                let p = model.gate_probability(g);
                if p > 0.0 && rng.random::<f64>() < p {
                    faults.push(Fault { op: op_index, pauli: random_pauli(n, &g.qubits(), rng) });
                }
            }
            Op::Measure { qubit, .. } => {
                if model.p_idle > 0.0 {
                    let mut flips = Vec::new();
                    for q in (0..n).filter(|q| q != qubit) {
                        if rng.random::<f64>() < model.p_idle {
                            flips.push((q, Letter::Z));
                        }
                    }
                    if !flips.is_empty() {
                        let pauli = PauliString::from_sparse(n, &flips).expect("qubits in range");
                        faults.push(Fault { op: op_index, pauli });
                    }
                }
            }
            Op::Barrier => {}
        }
    }
    faults
}

/// Replays a fixed fault pattern. Readout is left untouched.
pub struct FaultChannel<'a> {
    faults: &'a [Fault],
}

impl<'a> FaultChannel<'a> {
    pub fn new(faults: &'a [Fault]) -> Self {
        FaultChannel { faults }
    }

    fn apply(&self, index: usize, state: &mut StateVector) {
        for f in self.faults.iter().filter(|f| f.op == index) {
            state.apply_pauli(&f.pauli).expect("fault sized to the circuit");
        }
    }
}

impl Channel for FaultChannel<'_> {
    fn after_gate(&mut self, index: usize, _gate: &Gate, state: &mut StateVector) {
        self.apply(index, state);
    }

    fn before_measure(&mut self, index: usize, _qubit: usize, state: &mut StateVector) {
        self.apply(index, state);
    }
}

/// Draws every fault, readout flips included, while the circuit runs.
pub struct NoisyChannel<'a, R: Rng + ?Sized> {
    pub model: NoiseModel,
    pub rng: &'a mut R,
    /// Faults inserted so far, readout flips included.
    pub faults: usize,
}

impl<'a, R: Rng + ?Sized> NoisyChannel<'a, R> {
    pub fn new(model: NoiseModel, rng: &'a mut R) -> Self {
        NoisyChannel { model, rng, faults: 0 }
    }
}

impl<R: Rng + ?Sized> Channel for NoisyChannel<'_, R> {
    fn after_gate(&mut self, _index: usize, gate: &Gate, state: &mut StateVector) {
        let p = self.model.gate_probability(gate);
        if apply_gate_noise(state, &gate.qubits(), p, self.rng) {
            self.faults += 1;
        }
    }

    fn before_measure(&mut self, _index: usize, qubit: usize, state: &mut StateVector) {
        let idle: Vec<usize> = (0..state.n()).filter(|&q| q != qubit).collect();
        self.faults += apply_idle_noise(state, &idle, self.model.p_idle, self.rng);
    }

    fn readout(&mut self, _index: usize, bit: u8) -> u8 {
        let out = flip_bit(bit, self.model.p_readout, self.rng);
        if out != bit {
            self.faults += 1;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, Purpose};

    #[test]
    fn default_idle_probability() {
        let p = NoiseModel::default().p_idle;
        assert!((p - 0.005_782).abs() < 1e-5, "{p}");
    }

    #[test]
    fn zero_model_inserts_nothing() {
        let mut c = Circuit::new(2, 1);
        c.push(Gate::H(0)).push(Gate::Cx(0, 1)).measure(1, crate::circuit::Basis::Z, 0);
        let mut rng = stream(1, Purpose::Noise, 0);
        assert!(sample_faults(&c, &NoiseModel::NONE, &mut rng).is_empty());
    }

    #[test]
    fn certain_gate_fault_every_gate() {
        let mut c = Circuit::new(2, 0);
        c.push(Gate::H(0)).push(Gate::Cx(0, 1));
        let m = NoiseModel { p1: 1.0, p2: 1.0, ..NoiseModel::NONE };
        let mut rng = stream(2, Purpose::Noise, 0);
        let f = sample_faults(&c, &m, &mut rng);
        assert_eq!(f.len(), 2);
        assert!(f.iter().all(|f| !f.pauli.is_identity()));
        assert_eq!(f[0].pauli.support(), alloc::vec![0]);
    }

    #[test]
    fn invalid_probability_rejected() {
        assert!(NoiseModel { p1: 1.5, ..NoiseModel::NONE }.validate().is_err());
        assert!(NoiseModel::default().validate().is_ok());
    }
}
