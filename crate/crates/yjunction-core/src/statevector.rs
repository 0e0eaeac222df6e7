//! Dense statevector: gates, projective measurement of involutory
//! observables, inner products.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::linalg::phase_insensitive_fidelity;
use crate::pauli::{PauliString, PauliSum};
use crate::{C64, ZERO_PROBABILITY};

/// Largest register the engine will allocate.
pub const MAX_QUBITS: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<C64>,
}

/// Outcome of measuring an involutory observable.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    pub observable: PauliSum,
    /// `+1` or `−1`.
    pub eigenvalue: i8,
    /// Born probability of this eigenvalue in the pre-measurement state.
    pub probability: f64,
    /// True when the outcome was imposed rather than sampled.
    pub forced: bool,
}

impl MeasurementRecord {
    /// Outcome bit: 1 for eigenvalue −1.
    pub fn bit(&self) -> u8 {
        (self.eigenvalue < 0) as u8
    }
}

/// How a measurement picks its outcome.
pub enum Outcome<'a, R: Rng + ?Sized> {
    Sample(&'a mut R),
    Force(i8),
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(n: usize) -> Result<StateVector> {
        StateVector::basis(n, 0)
    }

    pub fn basis(n: usize, index: usize) -> Result<StateVector> {
        if n > MAX_QUBITS {
            return Err(Error::TooManyQubits(n, MAX_QUBITS));
        }
        if index >= 1 << n {
            return Err(Error::QubitOutOfRange { index, n });
        }
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
        amps[index] = C64::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    /// Normalizes the given amplitudes.
    pub fn from_amplitudes(n: usize, amps: Vec<C64>) -> Result<StateVector> {
        if n > MAX_QUBITS {
            return Err(Error::TooManyQubits(n, MAX_QUBITS));
        }
        if amps.len() != 1 << n {
            return Err(Error::LengthMismatch(1 << n, amps.len()));
        }
        let mut s = StateVector { n, amps };
        let norm = s.norm_sqr();
        if norm <= ZERO_PROBABILITY {
            return Err(Error::ZeroNorm);
        }
        s.scale(1.0 / libm::sqrt(norm));
        Ok(s)
    }

    /// `|a⟩ ⊗ |b⟩` with `a` on the low qubits.
    pub fn tensor(a: &StateVector, b: &StateVector) -> Result<StateVector> {
        let n = a.n + b.n;
        if n > MAX_QUBITS {
            return Err(Error::TooManyQubits(n, MAX_QUBITS));
        }
        let mut amps = Vec::with_capacity(1 << n);
        for hi in &b.amps {
            for lo in &a.amps {
                amps.push(hi * lo);
            }
        }
        Ok(StateVector { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn scale(&mut self, k: f64) {
        for a in &mut self.amps {
            *a *= k;
        }
    }

    /// `|ψ⟩ ← U|ψ⟩`.
    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.n)?;
        let (t, m, controls) = gate.kernel();
        let cmask: usize = controls.iter().map(|&q| 1usize << q).sum();
        let tbit = 1usize << t;
        for b in 0..self.amps.len() {
            if b & tbit != 0 || b & cmask != cmask {
                continue;
            }
            let a0 = self.amps[b];
            let a1 = self.amps[b | tbit];
            self.amps[b] = m[0][0] * a0 + m[0][1] * a1;
            self.amps[b | tbit] = m[1][0] * a0 + m[1][1] * a1;
        }
        Ok(())
    }

    pub fn apply_gates(&mut self, gates: &[Gate]) -> Result<()> {
        gates.iter().try_for_each(|g| self.apply_gate(g))
    }

    /// `|ψ⟩ ← P|ψ⟩` for a Pauli string of unit phase magnitude.
    pub fn apply_pauli(&mut self, p: &PauliString) -> Result<()> {
        if p.n() != self.n {
            return Err(Error::LengthMismatch(self.n, p.n()));
        }
        let mut out = vec![C64::new(0.0, 0.0); self.amps.len()];
        p.apply_add(&self.amps, C64::new(1.0, 0.0), &mut out);
        self.amps = out;
        Ok(())
    }

    /// Probability of `sign` and the normalized post-measurement state.
    pub fn project(&self, obs: &PauliSum, sign: i8) -> Result<(f64, StateVector)> {
        let (p, amps) = self.projected_amplitudes(obs, sign)?;
        if p <= ZERO_PROBABILITY {
            return Err(Error::ZeroProbability(p));
        }
        let mut post = StateVector { n: self.n, amps };
        post.scale(1.0 / libm::sqrt(p));
        Ok((p, post))
    }

    /// Unnormalized `P_sign|ψ⟩ = (|ψ⟩ + sign·O|ψ⟩)/2` and its squared norm.
    pub fn projected_amplitudes(&self, obs: &PauliSum, sign: i8) -> Result<(f64, Vec<C64>)> {
        check_observable(self.n, obs)?;
        let mut amps = project_raw(&self.amps, obs, sign);
        let p: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if p.is_nan() {
            amps.clear();
            return Err(Error::ZeroNorm);
        }
        Ok((p.min(1.0), amps))
    }

    /// Measures `obs`, sampling or imposing the eigenvalue; updates the state.
    pub fn measure<R: Rng + ?Sized>(&mut self, obs: &PauliSum, outcome: Outcome<'_, R>) -> Result<MeasurementRecord> {
        let (p_plus, plus) = self.projected_amplitudes(obs, 1)?;
        let p_minus = (1.0 - p_plus).max(0.0);
        let (eigenvalue, forced) = match outcome {
            Outcome::Force(s) if s == 1 || s == -1 => (s, true),
            Outcome::Force(s) => {
                return Err(Error::Unsupported(format!("eigenvalue {s}")));
            }
            Outcome::Sample(rng) => {
                let u: f64 = rng.random();
                (if u < p_plus { 1 } else { -1 }, false)
            }
        };
        let (probability, amps) = if eigenvalue == 1 {
            (p_plus, plus)
        } else {
            let (p, a) = self.projected_amplitudes(obs, -1)?;
            debug_assert!((p - p_minus).abs() < 1e-9);
            (p, a)
        };
        if probability <= ZERO_PROBABILITY {
            return Err(Error::ZeroProbability(probability));
        }
        self.amps = amps;
        self.scale(1.0 / libm::sqrt(probability));
        Ok(MeasurementRecord { observable: obs.clone(), eigenvalue, probability, forced })
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &StateVector) -> Result<C64> {
        if self.n != other.n {
            return Err(Error::LengthMismatch(self.n, other.n));
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::LengthMismatch(self.n, other.n));
        }
        Ok(phase_insensitive_fidelity(&self.amps, &other.amps))
    }

    /// Projects the state onto the subspace where qubit `q` reads `bit`.
    pub(crate) fn collapse_qubit(&mut self, q: usize, bit: u8, probability: f64) {
        let m = 1usize << q;
        let k = 1.0 / libm::sqrt(probability);
        for (b, a) in self.amps.iter_mut().enumerate() {
            if ((b & m != 0) as u8) == bit {
                *a *= k;
            } else {
                *a = C64::new(0.0, 0.0);
            }
        }
    }

    /// Probability that qubit `q` reads 1.
    pub fn prob_one(&self, q: usize) -> f64 {
        let m = 1usize << q;
        self.amps.iter().enumerate().filter(|(b, _)| b & m != 0).map(|(_, a)| a.norm_sqr()).sum()
    }
}

/// `(|ψ⟩ + sign·O|ψ⟩)/2` without normalization.
pub fn project_raw(amps: &[C64], obs: &PauliSum, sign: i8) -> Vec<C64> {
    let mut out: Vec<C64> = amps.iter().map(|a| a * 0.5).collect();
    for (c, p) in obs.terms() {
        p.apply_add(amps, C64::new(0.5 * f64::from(sign) * c, 0.0), &mut out);
    }
    out
}

fn check_observable(n: usize, obs: &PauliSum) -> Result<()> {
    if obs.n() != n {
        return Err(Error::LengthMismatch(n, obs.n()));
    }
    if !obs.is_involution(1e-9) {
        return Err(Error::NotInvolutory);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use crate::rng::{stream, Purpose};
    use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

    fn z(n: usize, q: usize) -> PauliSum {
        PauliSum::from_string(PauliString::single(n, q, crate::pauli::Letter::Z).unwrap()).unwrap()
    }

    #[test]
    fn hadamard_on_zero() {
        let mut s = StateVector::zero(1).unwrap();
        s.apply_gate(&Gate::H(0)).unwrap();
        assert!(crate::linalg::abs(s.amps()[0] - c(FRAC_1_SQRT_2, 0.0)) < 1e-15);
        assert!(crate::linalg::abs(s.amps()[1] - c(FRAC_1_SQRT_2, 0.0)) < 1e-15);
    }

    #[test]
    fn rz_phases() {
        let mut s = StateVector::zero(1).unwrap();
        s.apply_gate(&Gate::H(0)).unwrap();
        s.apply_gate(&Gate::Rz(0, FRAC_PI_2)).unwrap();
        let e0 = crate::linalg::cis(-FRAC_PI_4) * FRAC_1_SQRT_2;
        let e1 = crate::linalg::cis(FRAC_PI_4) * FRAC_1_SQRT_2;
        assert!(crate::linalg::abs(s.amps()[0] - e0) < 1e-15);
        assert!(crate::linalg::abs(s.amps()[1] - e1) < 1e-15);
    }

    #[test]
    fn controlled_gates_respect_qubit_order() {
        let mut s = StateVector::basis(3, 0b001).unwrap();
        s.apply_gate(&Gate::Cx(0, 2)).unwrap();
        assert!((s.amps()[0b101].re - 1.0).abs() < 1e-15);
        s.apply_gate(&Gate::Ccx(0, 2, 1)).unwrap();
        assert!((s.amps()[0b111].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn measure_z_on_zero() {
        let mut s = StateVector::zero(1).unwrap();
        let mut rng = stream(1, Purpose::Measurement, 0);
        let r = s.measure(&z(1, 0), Outcome::Sample(&mut rng)).unwrap();
        assert_eq!(r.eigenvalue, 1);
        assert!((r.probability - 1.0).abs() < 1e-15);
        assert!(!r.forced);
    }

    #[test]
    fn forced_impossible_outcome_errors() {
        let mut s = StateVector::zero(1).unwrap();
        let r = s.measure::<crate::rng::StreamRng>(&z(1, 0), Outcome::Force(-1));
        assert!(matches!(r, Err(Error::ZeroProbability(_))));
    }

    #[test]
    fn repeated_measurement_is_stable() {
        let mut s = StateVector::zero(2).unwrap();
        s.apply_gate(&Gate::H(0)).unwrap();
        s.apply_gate(&Gate::Cx(0, 1)).unwrap();
        let mut rng = stream(3, Purpose::Measurement, 0);
        let a = s.measure(&z(2, 1), Outcome::Sample(&mut rng)).unwrap();
        let b = s.measure(&z(2, 1), Outcome::Sample(&mut rng)).unwrap();
        assert_eq!(a.eigenvalue, b.eigenvalue);
        assert!((b.probability - 1.0).abs() < 1e-12);
    }

    #[test]
    fn size_guard() {
        assert!(matches!(StateVector::zero(25), Err(Error::TooManyQubits(25, 24))));
    }
}
