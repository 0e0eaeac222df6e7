//! Logical state and process tomography by linear inversion.

use alloc::vec::Vec;

use rand::Rng;

use crate::encoding::{Label, LogicalEncoding};
use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_eigen, kron, CMatrix, CVector};
use crate::pauli::{string_expectation, PauliString};
use crate::protocol::logical_paulis;
use crate::statevector::StateVector;
use crate::C64;

/// A density matrix on `k` logical qubits, basis index `Σ aₖ 2ᵏ`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    k: usize,
    m: CMatrix,
}

impl DensityMatrix {
    pub fn new(k: usize, m: CMatrix) -> Result<DensityMatrix> {
        let d = 1 << k;
        if m.nrows() != d || m.ncols() != d {
            return Err(Error::LengthMismatch(d, m.nrows()));
        }
        Ok(DensityMatrix { k, m })
    }

    pub fn pure(k: usize, psi: &[C64]) -> Result<DensityMatrix> {
        let v = CVector::from_column_slice(psi);
        DensityMatrix::new(k, &v * v.adjoint())
    }

    pub fn maximally_mixed(k: usize) -> DensityMatrix {
        let d = 1 << k;
        DensityMatrix { k, m: CMatrix::identity(d, d) * c(1.0 / d as f64, 0.0) }
    }

    pub fn qubits(&self) -> usize {
        self.k
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    /// `tr(ρ P)` for a logical Pauli string.
    pub fn expectation(&self, p: &PauliString) -> f64 {
        (LogicalEncoding::logical_matrix(p) * &self.m).trace().re
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn fidelity_pure(&self, psi: &[C64]) -> f64 {
        let v = CVector::from_column_slice(psi);
        (v.adjoint() * &self.m * &v)[(0, 0)].re
    }

    /// `C ρ C†` for a logical Pauli.
    pub fn conjugated(&self, p: &PauliString) -> DensityMatrix {
        let pm = LogicalEncoding::logical_matrix(p);
        DensityMatrix { k: self.k, m: &pm * &self.m * pm.adjoint() }
    }

    /// Weighted sum `Σ wᵢ ρᵢ`.
    pub fn mix(parts: &[(f64, DensityMatrix)]) -> Result<DensityMatrix> {
        let first = parts.first().ok_or(Error::NoShots)?;
        let mut m = CMatrix::zeros(first.1.m.nrows(), first.1.m.ncols());
        for (w, r) in parts {
            if r.k != first.1.k {
                return Err(Error::LengthMismatch(first.1.k, r.k));
            }
            m += &r.m * c(*w, 0.0);
        }
        Ok(DensityMatrix { k: first.1.k, m })
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigen(&self.m).0
    }

    /// Nearest unit-trace positive matrix obtained by zeroing negative
    /// eigenvalues and rescaling.
    pub fn clipped(&self) -> DensityMatrix {
        let h = (&self.m + self.m.adjoint()) * c(0.5, 0.0);
        let (vals, vecs) = hermitian_eigen(&h);
        let pos: Vec<f64> = vals.iter().map(|&v| v.max(0.0)).collect();
        let total: f64 = pos.iter().sum();
        let d = h.nrows();
        if total <= 0.0 {
            return DensityMatrix::maximally_mixed(self.k);
        }
        let mut m = CMatrix::zeros(d, d);
        for (i, &v) in pos.iter().enumerate() {
            if v > 0.0 {
                let col = vecs.column(i);
                m += col * col.adjoint() * c(v / total, 0.0);
            }
        }
        DensityMatrix { k: self.k, m }
    }
}

/// Logical amplitudes of a label tuple, index `Σ aₖ 2ᵏ`.
pub fn label_vector(labels: &[Label]) -> Vec<C64> {
    let mut v = CMatrix::identity(1, 1);
    for l in labels {
        let (a, b) = l.amplitudes();
        v = kron(&CMatrix::from_column_slice(2, 1, &[a, b]), &v);
    }
    v.iter().copied().collect()
}

/// `⟨P_L⟩` for every non-identity logical Pauli string, measured as its
/// physical representative.
pub fn logical_expectations(state: &StateVector, enc: &LogicalEncoding) -> Result<Vec<(PauliString, f64)>> {
    logical_paulis(enc.logical_qubits())
        .into_iter()
        .filter(|p| !p.is_identity())
        .map(|p| Ok((p, string_expectation(state, &enc.physical_pauli(&p)?)?)))
        .collect()
}

/// Estimate of an expectation from `shots` ±1 draws.
pub fn sample_expectation<R: Rng + ?Sized>(exact: f64, shots: usize, rng: &mut R) -> Result<f64> {
    if shots == 0 {
        return Err(Error::NoShots);
    }
    let p_plus = ((1.0 + exact) / 2.0).clamp(0.0, 1.0);
    let plus = (0..shots).filter(|_| rng.random::<f64>() < p_plus).count();
    Ok((2.0 * plus as f64 - shots as f64) / shots as f64)
}

/// Linear-inversion estimate `ρ = (I + Σ ⟨P⟩ P) / d`, without positivity
/// enforcement.
pub fn reconstruct_linear(k: usize, expectations: &[(PauliString, f64)]) -> Result<DensityMatrix> {
    let d = 1 << k;
    let mut m = CMatrix::identity(d, d);
    for (p, e) in expectations {
        if p.n() != k {
            return Err(Error::LengthMismatch(k, p.n()));
        }
        m += LogicalEncoding::logical_matrix(p) * c(*e, 0.0);
    }
    DensityMatrix::new(k, m * c(1.0 / d as f64, 0.0))
}

/// Linear inversion followed by eigenvalue clipping.
pub fn reconstruct(k: usize, expectations: &[(PauliString, f64)]) -> Result<DensityMatrix> {
    Ok(reconstruct_linear(k, expectations)?.clipped())
}

/// The `4ᵏ` process-tomography inputs `{0, 1, +, i+}ᵏ`, logical qubit 0
/// varying fastest.
pub fn process_inputs(k: usize) -> Vec<Vec<Label>> {
    (0..1usize << (2 * k)).map(|code| (0..k).map(|q| Label::ALL[code >> (2 * q) & 3]).collect()).collect()
}

/// Choi matrix `J = Σ_ab |a⟩⟨b| ⊗ Λ(|a⟩⟨b|)` reconstructed from the
/// outputs for [`process_inputs`], in that order.
pub fn choi_from_outputs(k: usize, outputs: &[DensityMatrix]) -> Result<CMatrix> {
    let inputs = process_inputs(k);
    if outputs.len() != inputs.len() {
        return Err(Error::LengthMismatch(inputs.len(), outputs.len()));
    }
    let d = 1 << k;
    let d2 = d * d;
    // Column j: vec(ρ_j), row-major.
    let mut a = CMatrix::zeros(d2, d2);
    for (j, labels) in inputs.iter().enumerate() {
        let rho = DensityMatrix::pure(k, &label_vector(labels))?;
        for r in 0..d {
            for s in 0..d {
                a[(r * d + s, j)] = rho.m[(r, s)];
            }
        }
    }
    let a_inv = a.try_inverse().ok_or(Error::ZeroNorm)?;
    let mut j = CMatrix::zeros(d2, d2);
    for ai in 0..d {
        for bi in 0..d {
            // |a⟩⟨b| = Σ_j coeff_j ρ_j, so Λ(|a⟩⟨b|) = Σ_j coeff_j Λ(ρ_j).
            let coeff = a_inv.column(ai * d + bi);
            let mut lam = CMatrix::zeros(d, d);
            for (jj, out) in outputs.iter().enumerate() {
                lam += &out.m * coeff[jj];
            }
            j.view_mut((ai * d, bi * d), (d, d)).copy_from(&lam);
        }
    }
    Ok(j)
}

/// Choi matrix of a unitary.
pub fn unitary_choi(u: &CMatrix) -> CMatrix {
    let d = u.nrows();
    let mut omega = CVector::zeros(d * d);
    for a in 0..d {
        for r in 0..d {
            omega[a * d + r] = u[(r, a)];
        }
    }
    &omega * omega.adjoint()
}

/// Process fidelity `⟨Φ_U|J|Φ_U⟩ / d` against a target unitary.
pub fn process_fidelity(choi: &CMatrix, target: &CMatrix) -> f64 {
    let d = target.nrows();
    let mut phi = CVector::zeros(d * d);
    for a in 0..d {
        for r in 0..d {
            phi[a * d + r] = target[(r, a)] / c(libm::sqrt(d as f64), 0.0);
        }
    }
    (phi.adjoint() * choi * &phi)[(0, 0)].re / d as f64
}

/// Average gate fidelity from process fidelity.
pub fn average_gate_fidelity(process: f64, d: usize) -> f64 {
    (d as f64 * process + 1.0) / (d as f64 + 1.0)
}

/// `U|ψ⟩` on logical amplitudes.
pub fn apply_unitary(u: &CMatrix, psi: &[C64]) -> Vec<C64> {
    let v = u * CVector::from_column_slice(psi);
    v.iter().copied().collect()
}
