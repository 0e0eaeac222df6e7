use proptest::prelude::*;
use yjunction_core::encoding::{Label, LogicalEncoding};
use yjunction_core::linalg::{abs, c, hermitian_eigen, CMatrix};
use yjunction_core::pauli::{Letter, PauliString};
use yjunction_core::protocol::{logical_paulis, rxx, rz};
use yjunction_core::tomography::{
    apply_unitary, average_gate_fidelity, choi_from_outputs, label_vector, process_fidelity, process_inputs,
    reconstruct, reconstruct_linear, unitary_choi, DensityMatrix,
};

fn single(l: Letter) -> PauliString {
    PauliString::from_letters(&[l]).unwrap()
}

fn bloch(x: f64, y: f64, z: f64) -> Vec<(PauliString, f64)> {
    vec![(single(Letter::X), x), (single(Letter::Y), y), (single(Letter::Z), z)]
}

/// Outputs of the channel `ρ ↦ (1−p) UρU† + p I/d` on the canonical inputs.
fn depolarized_outputs(u: &CMatrix, p: f64) -> Vec<DensityMatrix> {
    let d = u.nrows();
    let k = d.trailing_zeros() as usize;
    process_inputs(k)
        .iter()
        .map(|labels| {
            let out = DensityMatrix::pure(k, &apply_unitary(u, &label_vector(labels))).unwrap();
            DensityMatrix::mix(&[(1.0 - p, out), (p, DensityMatrix::maximally_mixed(k))]).unwrap()
        })
        .collect()
}

#[test]
fn pure_and_mixed_reconstructions() {
    let plus = reconstruct(1, &bloch(1.0, 0.0, 0.0)).unwrap();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    assert!((plus.fidelity_pure(&[c(s, 0.0), c(s, 0.0)]) - 1.0).abs() < 1e-12);
    let mixed = reconstruct(1, &bloch(0.0, 0.0, 0.0)).unwrap();
    assert!((mixed.fidelity_pure(&[c(1.0, 0.0), c(0.0, 0.0)]) - 0.5).abs() < 1e-12);
}

#[test]
fn clipping_matches_an_eigendecomposition_oracle() {
    let lin = reconstruct_linear(1, &bloch(0.9, 0.0, 0.05)).unwrap();
    let rho = reconstruct(1, &bloch(0.9, 0.0, 0.05)).unwrap();
    // Bloch length below one: already physical, clipping is the identity.
    let (ev, _) = hermitian_eigen(lin.matrix());
    assert!(ev.iter().all(|&e| e >= 0.0));
    assert!(rho.eigenvalues().iter().all(|&e| e >= -1e-10));
    let target = [c(std::f64::consts::FRAC_1_SQRT_2, 0.0), c(std::f64::consts::FRAC_1_SQRT_2, 0.0)];
    let f_oracle = {
        let m = lin.matrix();
        let v = nalgebra::DVector::from_column_slice(&target);
        (v.adjoint() * m * &v)[(0, 0)].re
    };
    assert!((rho.fidelity_pure(&target) - f_oracle).abs() < 1e-12);
    assert!((f_oracle - 0.95).abs() < 1e-12);

    let over = reconstruct(1, &bloch(1.2, 0.0, 0.0)).unwrap();
    assert!(over.eigenvalues().iter().all(|&e| e >= -1e-10));
    assert!((over.trace() - 1.0).abs() < 1e-10);
}

#[test]
fn unitary_process_fidelity_is_one_and_paulis_are_orthogonal() {
    for u in [rz(0.3), rz(std::f64::consts::FRAC_PI_2)] {
        assert!((process_fidelity(&unitary_choi(&u), &u) - 1.0).abs() < 1e-12);
        for l in [Letter::X, Letter::Y, Letter::Z] {
            let up = &u * LogicalEncoding::logical_matrix(&single(l));
            assert!(process_fidelity(&unitary_choi(&up), &u).abs() < 1e-12, "{l:?}");
        }
    }
}

#[test]
fn choi_inversion_recovers_unitaries() {
    for u in [rz(0.7), rxx(std::f64::consts::FRAC_PI_2)] {
        let outs = depolarized_outputs(&u, 0.0);
        let k = u.nrows().trailing_zeros() as usize;
        let j = choi_from_outputs(k, &outs).unwrap();
        let diff = (&j - unitary_choi(&u)).iter().map(|x| abs(*x)).fold(0.0, f64::max);
        assert!(diff < 1e-12);
    }
}

#[test]
fn depolarizing_fidelity_is_linear_in_p() {
    let u = rz(std::f64::consts::FRAC_PI_4);
    let mut last = f64::INFINITY;
    for i in 0..=6 {
        let p = 0.05 * i as f64;
        let j = choi_from_outputs(1, &depolarized_outputs(&u, p)).unwrap();
        let f = process_fidelity(&j, &u);
        assert!((f - (1.0 - 3.0 * p / 4.0)).abs() < 1e-9, "p = {p}: {f}");
        assert!(f < last);
        last = f;
    }
    // Two qubits: 1 − 15p/16.
    let u = rxx(-std::f64::consts::FRAC_PI_2);
    let j = choi_from_outputs(2, &depolarized_outputs(&u, 0.2)).unwrap();
    assert!((process_fidelity(&j, &u) - (1.0 - 15.0 * 0.2 / 16.0)).abs() < 1e-9);
}

#[test]
fn average_gate_fidelity_rescaling() {
    assert_eq!(average_gate_fidelity(1.0, 2), 1.0);
    assert!((average_gate_fidelity(0.85, 2) - 0.9).abs() < 1e-12);
    assert!((average_gate_fidelity(0.0, 4) - 0.2).abs() < 1e-12);
}

#[test]
fn inputs_are_ordered_with_qubit_zero_fastest() {
    let i = process_inputs(2);
    assert_eq!(i.len(), 16);
    assert_eq!(i[1], vec![Label::One, Label::Zero]);
    assert_eq!(i[4], vec![Label::Zero, Label::One]);
}

proptest! {
    /// Expectations of a physical two-qubit state reconstruct it exactly.
    #[test]
    fn exact_pipeline_is_the_identity(v in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 8)) {
        let a: Vec<_> = v[..4].iter().map(|(x, y)| c(*x, *y)).collect();
        let b: Vec<_> = v[4..].iter().map(|(x, y)| c(*x, *y)).collect();
        let na: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let nb: f64 = b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        prop_assume!(na > 1e-3 && nb > 1e-3);
        let a: Vec<_> = a.iter().map(|z| z / na).collect();
        let b: Vec<_> = b.iter().map(|z| z / nb).collect();
        let rho = DensityMatrix::mix(&[(0.3, DensityMatrix::pure(2, &a).unwrap()), (0.7, DensityMatrix::pure(2, &b).unwrap())]).unwrap();
        let e: Vec<_> = logical_paulis(2).into_iter().filter(|p| !p.is_identity()).map(|p| {
            let x = rho.expectation(&p);
            (p, x)
        }).collect();
        let back = reconstruct(2, &e).unwrap();
        let diff = (back.matrix() - rho.matrix()).iter().map(|x| abs(*x)).fold(0.0, f64::max);
        prop_assert!(diff < 1e-10);
    }
}
