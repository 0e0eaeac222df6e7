use proptest::prelude::*;
use yjunction_core::encoding::{check_codespace, EncodingId, LogicalEncoding};
use yjunction_core::gate::Gate;
use yjunction_core::linalg::{abs, c, CMatrix};
use yjunction_core::pauli::{string_expectation, Letter, PauliString, Phase};
use yjunction_core::rng::{stream, Purpose};
use yjunction_core::statevector::{Outcome, StateVector};
use yjunction_core::tomography::process_inputs;

fn close(a: &CMatrix, b: &CMatrix) -> bool {
    a.iter().zip(b.iter()).all(|(x, y)| abs(x - y) < 1e-12)
}

fn letter() -> impl Strategy<Value = Letter> {
    prop::sample::select(Letter::ALL.to_vec())
}

fn pauli(n: usize) -> impl Strategy<Value = PauliString> {
    (prop::collection::vec(letter(), n), 0i32..4)
        .prop_map(|(l, k)| PauliString::from_letters(&l).unwrap().with_phase(Phase::from_exponent(k)))
}

#[test]
fn every_two_qubit_product_matches_its_matrix() {
    let all: Vec<PauliString> = Letter::ALL
        .iter()
        .flat_map(|&a| Letter::ALL.iter().map(move |&b| PauliString::from_letters(&[a, b]).unwrap()))
        .collect();
    for a in &all {
        for b in &all {
            let ab = a.to_matrix() * b.to_matrix();
            assert!(close(&a.mul(b).unwrap().to_matrix(), &ab), "{a} {b}");
            let ba = b.to_matrix() * a.to_matrix();
            assert_eq!(a.commutes(b).unwrap(), close(&ab, &ba), "{a} {b}");
        }
    }
}

#[test]
fn gauge_operators_commute_and_label_states() {
    for id in [EncodingId::Y1, EncodingId::Y2] {
        let enc = LogicalEncoding::new(id);
        let ops = enc.gauge_ops();
        for a in ops {
            for b in ops {
                assert!(a.op.commutes(&b.op).unwrap(), "{id} {} {}", a.name, b.name);
            }
        }
        for labels in process_inputs(enc.logical_qubits()) {
            let rep = check_codespace(&enc.basis_state(&labels).unwrap(), &enc).unwrap();
            assert!(rep.in_codespace(), "{id} {labels:?}: {}", rep.summary());
        }
    }
}

#[test]
fn logical_observables_form_pauli_algebras() {
    for id in [EncodingId::Y1, EncodingId::Y2] {
        let enc = LogicalEncoding::new(id);
        let k = enc.logical_qubits();
        for q in 0..k {
            for a in 0..3 {
                let pa = enc.logical_observable(q, a).unwrap();
                assert!(pa.mul(&pa).unwrap().is_identity());
                for r in 0..k {
                    for b in 0..3 {
                        let pb = enc.logical_observable(r, b).unwrap();
                        let anti = q == r && a != b;
                        assert_eq!(pa.commutes(&pb).unwrap(), !anti, "{id} {q}{a} {r}{b}");
                    }
                }
            }
        }
    }
}

#[test]
fn logical_basis_is_orthonormal() {
    for id in [EncodingId::Y1, EncodingId::Y2] {
        let b = LogicalEncoding::new(id).computational_basis();
        for (i, x) in b.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                let o = x.overlap(y).unwrap();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!(abs(o - c(want, 0.0)) < 1e-12);
            }
        }
    }
}

#[test]
fn label_eigenvalues() {
    let enc = LogicalEncoding::y1();
    let z = enc.logical_observable(0, 2).unwrap();
    let zero = enc.basis_state(&[yjunction_core::encoding::Label::Zero]).unwrap();
    let one = enc.basis_state(&[yjunction_core::encoding::Label::One]).unwrap();
    assert!((string_expectation(&zero, &z).unwrap() - 1.0).abs() < 1e-12);
    assert!((string_expectation(&one, &z).unwrap() + 1.0).abs() < 1e-12);
}

proptest! {
    #[test]
    fn products_are_associative(a in pauli(3), b in pauli(3), c3 in pauli(3)) {
        let l = a.mul(&b).unwrap().mul(&c3).unwrap();
        let r = a.mul(&b.mul(&c3).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn products_match_matrices(a in pauli(3), b in pauli(3)) {
        prop_assert!(close(&a.mul(&b).unwrap().to_matrix(), &(a.to_matrix() * b.to_matrix())));
        prop_assert_eq!(a.commutes(&b).unwrap(), b.commutes(&a).unwrap());
    }

    #[test]
    fn text_round_trip(a in pauli(5)) {
        prop_assume!(a.is_hermitian());
        let back: PauliString = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn junction_observables_square_to_one(theta in 0.0f64..std::f64::consts::PI, phi in 0.0f64..std::f64::consts::TAU) {
        for enc in [LogicalEncoding::y1(), LogicalEncoding::y2()] {
            let h = enc.junction().hamiltonian(enc.physical_qubits(), theta, phi).unwrap();
            prop_assert!(h.is_involution(1e-12));
        }
    }

    #[test]
    fn gates_preserve_norm(ops in prop::collection::vec((0usize..6, 0usize..3, 0usize..3, -3.0f64..3.0), 1..30)) {
        let mut s = StateVector::zero(3).unwrap();
        for (kind, a, b, t) in ops {
            let g = match kind {
                0 => Gate::H(a),
                1 => Gate::Rx(a, t),
                2 => Gate::Ry(a, t),
                3 => Gate::Rz(a, t),
                4 if a != b => Gate::Cx(a, b),
                5 if a != b => Gate::Cy(a, b),
                _ => Gate::S(a),
            };
            s.apply_gate(&g).unwrap();
        }
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn measurement_probabilities_sum_to_one(theta in 0.1f64..3.0, seed in 0u64..1000) {
        let mut s = StateVector::zero(2).unwrap();
        s.apply_gate(&Gate::Ry(0, theta)).unwrap();
        s.apply_gate(&Gate::Cx(0, 1)).unwrap();
        let zz: yjunction_core::pauli::PauliSum = "+ZI".parse().unwrap();
        let (p, _) = s.projected_amplitudes(&zz, 1).unwrap();
        let (m, _) = s.projected_amplitudes(&zz, -1).unwrap();
        prop_assert!((p + m - 1.0).abs() < 1e-12);
        let mut rng = stream(seed, Purpose::Measurement, 0);
        let r = s.measure(&zz, Outcome::Sample(&mut rng)).unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        prop_assert!(r.probability > 0.0);
    }
}
