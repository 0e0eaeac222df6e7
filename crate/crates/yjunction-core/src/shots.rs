//! Shot model of a logical tomography experiment on a gate circuit.
//!
//! A shot runs the gate circuit, records its outcome string, then reads
//! every logical qubit in one of the X, Y, Z bases (a *setting*). Shots are
//! grouped by recorded outcome string; each group is reconstructed on its
//! own, rotated by its frame correction and weighted by its share of shots.
//!
//! Circuit branches are computed exactly once per fault pattern in a
//! [`BranchTable`]. Sampling a shot from the table is distributed exactly
//! like running the trajectory: gate and idle faults are drawn before the
//! circuit starts, and readout flips only touch recorded values.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::circuit::{enumerate_branches, Basis, Circuit, CircuitBranch};
use crate::encoding::LogicalEncoding;
use crate::error::{Error, Result};
use crate::noise::{flip_bit, Fault, FaultChannel};
use crate::pauli::{string_expectation, Letter, PauliString};
use crate::protocol::{FrameTable, OutcomeString};
use crate::statevector::StateVector;
use crate::tomography::{reconstruct, DensityMatrix};

/// Logical Pauli string for a code whose 2-bit digit `q` is the letter of
/// logical qubit `q` (`I, X, Y, Z` = 0..4).
pub fn pauli_from_code(k: usize, code: usize) -> PauliString {
    let letters: Vec<Letter> = (0..k).map(|q| Letter::ALL[code >> (2 * q) & 3]).collect();
    PauliString::from_letters(&letters).expect("k is small")
}

/// All `3ᵏ` measurement settings, logical qubit 0 varying fastest.
pub fn settings(k: usize) -> Vec<Vec<Basis>> {
    let bases = [Basis::X, Basis::Y, Basis::Z];
    (0..3usize.pow(k as u32))
        .map(|mut code| {
            (0..k)
                .map(|_| {
                    let b = bases[code % 3];
                    code /= 3;
                    b
                })
                .collect()
        })
        .collect()
}

fn letter_code(b: Basis) -> usize {
    match b {
        Basis::X => 1,
        Basis::Y => 2,
        Basis::Z => 3,
    }
}

/// Exact outcome-string probabilities of a circuit with, per branch, the
/// logical Pauli expectations of the post-measurement state.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchTable {
    k: usize,
    outcome_len: usize,
    probs: Vec<f64>,
    /// `expectations[s][code]`, with `code` as in [`pauli_from_code`].
    expectations: Vec<Vec<f64>>,
}

impl BranchTable {
    /// Runs `circuit` from `|0…0⟩` with the given faults inserted.
    pub fn compute(circuit: &Circuit, enc: &LogicalEncoding, faults: &[Fault]) -> Result<BranchTable> {
        let input = StateVector::zero(circuit.n_qubits)?;
        let branches = enumerate_branches(circuit, &input, &mut FaultChannel::new(faults))?;
        BranchTable::from_branches(enc, circuit.n_clbits, &branches)
    }

    pub fn from_branches(enc: &LogicalEncoding, outcome_len: usize, branches: &[CircuitBranch]) -> Result<BranchTable> {
        let k = enc.logical_qubits();
        let n_codes = 1 << (2 * k);
        let reps: Vec<PauliString> =
            (0..n_codes).map(|code| enc.physical_pauli(&pauli_from_code(k, code))).collect::<Result<_>>()?;
        let mut probs = vec![0.0; 1 << outcome_len];
        let mut expectations = vec![vec![0.0; n_codes]; 1 << outcome_len];
        for br in branches {
            if br.clbits.len() != outcome_len {
                return Err(Error::LengthMismatch(outcome_len, br.clbits.len()));
            }
            let s = OutcomeString::from_bits(&br.clbits).bits() as usize;
            let w = br.probability;
            let total = probs[s] + w;
            for (code, rep) in reps.iter().enumerate() {
                let e = string_expectation(&br.state, rep)?;
                expectations[s][code] = (expectations[s][code] * probs[s] + e * w) / total;
            }
            probs[s] = total;
        }
        Ok(BranchTable { k, outcome_len, probs, expectations })
    }

    pub fn logical_qubits(&self) -> usize {
        self.k
    }

    pub fn outcome_len(&self) -> usize {
        self.outcome_len
    }

    pub fn probability(&self, s: OutcomeString) -> f64 {
        self.probs[s.bits() as usize]
    }

    /// Logical expectations in branch `s` (index 0 is the identity).
    pub fn expectations(&self, s: OutcomeString) -> &[f64] {
        &self.expectations[s.bits() as usize]
    }

    pub fn sample_outcome<R: Rng + ?Sized>(&self, rng: &mut R) -> OutcomeString {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut last = 0;
        for (s, &p) in self.probs.iter().enumerate() {
            if p > 0.0 {
                last = s;
                acc += p;
                if u < acc {
                    break;
                }
            }
        }
        OutcomeString::new(last as u8, self.outcome_len)
    }

    /// Joint distribution of the logical readout for `setting` in branch
    /// `s`; index bit `q` is 1 when logical qubit `q` read −1.
    pub fn readout_distribution(&self, s: OutcomeString, setting: &[Basis]) -> Vec<f64> {
        let e = self.expectations(s);
        let k = self.k;
        (0..1usize << k)
            .map(|m| {
                let mut p = 0.0;
                for subset in 0..1usize << k {
                    let code: usize =
                        (0..k).filter(|q| subset >> q & 1 == 1).map(|q| letter_code(setting[q]) << (2 * q)).sum();
                    let sign = if (subset & m).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
                    p += sign * e[code];
                }
                (p / (1 << k) as f64).max(0.0)
            })
            .collect()
    }
}

/// One recorded shot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shot {
    pub outcome: OutcomeString,
    /// Bit `q` is 1 when logical qubit `q` was recorded as −1.
    pub logical: u8,
}

/// Samples one shot: branch and logical readout from `meas_rng`, readout
/// flips from `noise_rng`.
pub fn sample_shot<R1: Rng + ?Sized, R2: Rng + ?Sized>(
    table: &BranchTable,
    setting: &[Basis],
    p_readout: f64,
    meas_rng: &mut R1,
    noise_rng: &mut R2,
) -> Shot {
    let s = table.sample_outcome(meas_rng);
    let dist = table.readout_distribution(s, setting);
    let u: f64 = meas_rng.random::<f64>() * dist.iter().sum::<f64>();
    let mut acc = 0.0;
    let mut m = dist.len() - 1;
    for (i, p) in dist.iter().enumerate() {
        acc += p;
        if u < acc {
            m = i;
            break;
        }
    }
    let mut bits = s.bits();
    for b in 0..table.outcome_len {
        bits ^= flip_bit(0, p_readout, noise_rng) << b;
    }
    let mut logical = m as u8;
    for q in 0..table.k {
        logical ^= flip_bit(0, p_readout, noise_rng) << q;
    }
    Shot { outcome: OutcomeString::new(bits, table.outcome_len), logical }
}

/// Shot counts indexed by setting, recorded outcome string and logical
/// readout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counts {
    k: usize,
    outcome_len: usize,
    data: Vec<u64>,
}

impl Counts {
    pub fn new(k: usize, outcome_len: usize) -> Counts {
        let n = 3usize.pow(k as u32) << (outcome_len + k);
        Counts { k, outcome_len, data: vec![0; n] }
    }

    pub fn logical_qubits(&self) -> usize {
        self.k
    }

    pub fn outcome_len(&self) -> usize {
        self.outcome_len
    }

    /// Cells per setting: `2^outcome_len · 2^k`.
    pub fn cells_per_setting(&self) -> usize {
        1 << (self.outcome_len + self.k)
    }

    fn index(&self, setting: usize, s: OutcomeString, m: u8) -> usize {
        (setting << (self.outcome_len + self.k)) | ((s.bits() as usize) << self.k) | m as usize
    }

    pub fn add(&mut self, setting: usize, shot: Shot) {
        let i = self.index(setting, shot.outcome, shot.logical);
        self.data[i] += 1;
    }

    pub fn merge(&mut self, other: &Counts) -> Result<()> {
        if other.data.len() != self.data.len() {
            return Err(Error::LengthMismatch(self.data.len(), other.data.len()));
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        Ok(())
    }

    /// Cells of one setting, outcome-major.
    pub fn setting_cells(&self, setting: usize) -> &[u64] {
        let w = self.cells_per_setting();
        &self.data[setting * w..(setting + 1) * w]
    }

    pub fn setting_cells_mut(&mut self, setting: usize) -> &mut [u64] {
        let w = self.cells_per_setting();
        &mut self.data[setting * w..(setting + 1) * w]
    }

    pub fn total(&self) -> u64 {
        self.data.iter().sum()
    }

    pub fn outcome_total(&self, s: OutcomeString) -> u64 {
        let n_settings = 3usize.pow(self.k as u32);
        (0..n_settings)
            .flat_map(|st| (0..1u8 << self.k).map(move |m| (st, m)))
            .map(|(st, m)| self.data[self.index(st, s, m)])
            .sum()
    }

    /// Estimated logical expectations for recorded outcome `s`, averaging
    /// every setting compatible with each Pauli. Paulis without data are
    /// estimated as 0.
    pub fn expectations(&self, s: OutcomeString) -> Vec<(PauliString, f64)> {
        let k = self.k;
        let all = settings(k);
        (1..1usize << (2 * k))
            .map(|code| {
                let mut sum = 0i64;
                let mut n = 0u64;
                for (si, st) in all.iter().enumerate() {
                    let compatible = (0..k).all(|q| {
                        let l = code >> (2 * q) & 3;
                        l == 0 || l == letter_code(st[q])
                    });
                    if !compatible {
                        continue;
                    }
                    let support: usize = (0..k).filter(|q| code >> (2 * q) & 3 != 0).map(|q| 1 << q).sum();
                    for m in 0..1u8 << k {
                        let c = self.data[self.index(si, s, m)];
                        let sign = if (m as usize & support).count_ones() % 2 == 1 { -1 } else { 1 };
                        sum += sign * c as i64;
                        n += c;
                    }
                }
                let e = if n == 0 { 0.0 } else { sum as f64 / n as f64 };
                (pauli_from_code(k, code), e)
            })
            .collect()
    }

    /// Frame-corrected, shot-weighted output state.
    pub fn corrected_state(&self, frame: &FrameTable) -> Result<DensityMatrix> {
        if frame.outcome_len() != self.outcome_len {
            return Err(Error::LengthMismatch(self.outcome_len, frame.outcome_len()));
        }
        let total = self.total();
        if total == 0 {
            return Err(Error::NoShots);
        }
        let mut parts = Vec::new();
        for s in OutcomeString::all(self.outcome_len) {
            let n = self.outcome_total(s);
            if n == 0 {
                continue;
            }
            let rho = reconstruct(self.k, &self.expectations(s))?;
            parts.push((n as f64 / total as f64, rho.conjugated(&frame.get(s))));
        }
        DensityMatrix::mix(&parts)
    }
}

/// Infinite-shot limit of [`Counts::corrected_state`] with readout flips of
/// probability `p_readout` on every recorded value.
pub fn exact_corrected_state(table: &BranchTable, frame: &FrameTable, p_readout: f64) -> Result<DensityMatrix> {
    let k = table.k;
    let len = table.outcome_len;
    let n_codes = 1usize << (2 * k);
    let mut parts = Vec::new();
    for recorded in OutcomeString::all(len) {
        let mut w = 0.0;
        let mut e = vec![0.0; n_codes];
        for truth in OutcomeString::all(len) {
            let p = table.probability(truth);
            if p == 0.0 {
                continue;
            }
            let flips = (recorded.bits() ^ truth.bits()).count_ones() as i32;
            let q = libm::pow(p_readout, flips as f64) * libm::pow(1.0 - p_readout, (len as i32 - flips) as f64);
            let wt = p * q;
            if wt == 0.0 {
                continue;
            }
            for (acc, x) in e.iter_mut().zip(table.expectations(truth)) {
                *acc += wt * x;
            }
            w += wt;
        }
        if w <= 0.0 {
            continue;
        }
        let exps: Vec<(PauliString, f64)> = (1..n_codes)
            .map(|code| {
                let p = pauli_from_code(k, code);
                let att = libm::pow(1.0 - 2.0 * p_readout, p.weight() as f64);
                (p, att * e[code] / w)
            })
            .collect();
        let rho = reconstruct(k, &exps)?;
        parts.push((w, rho.conjugated(&frame.get(recorded))));
    }
    DensityMatrix::mix(&parts)
}
