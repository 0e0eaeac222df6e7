#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use yjunction_core::circuit::{enumerate_branches, Basis, Circuit, CircuitBranch, Ideal};
use yjunction_core::gate::Gate;
use yjunction_core::linalg::abs;
use yjunction_core::statevector::StateVector;

/// A random circuit on 1 to 4 qubits with every gate kind, barriers and
/// measurements in all three bases.
pub fn random_circuit(seed: u64) -> Circuit {
    let mut rng = StdRng::seed_from_u64(seed);
    let n = rng.random_range(1..=4usize);
    let m = rng.random_range(0..=3usize);
    let mut c = Circuit::new(n, m);
    let len = rng.random_range(0..25);
    for _ in 0..len {
        let a = rng.random_range(0..n);
        let t: f64 = rng.random_range(-7.0..7.0);
        let roll = rng.random_range(0..22);
        if roll >= 19 {
            if m > 0 && roll < 21 {
                let basis = [Basis::X, Basis::Y, Basis::Z][rng.random_range(0..3)];
                c.measure(a, basis, rng.random_range(0..m));
            } else {
                c.barrier();
            }
            continue;
        }
        let two = n >= 2 && roll >= 14;
        let b = (a + 1 + rng.random_range(0..n.max(2) - 1)) % n;
        let g = match roll {
            0 => Gate::I(a),
            1 => Gate::H(a),
            2 => Gate::X(a),
            3 => Gate::Y(a),
            4 => Gate::Z(a),
            5 => Gate::S(a),
            6 => Gate::Sdg(a),
            7 => Gate::T(a),
            8 => Gate::Tdg(a),
            9 => Gate::Sx(a),
            10 => Gate::Sxdg(a),
            11 => Gate::Rx(a, t),
            12 => Gate::Ry(a, t),
            13 => Gate::Rz(a, t),
            14 if two => Gate::Cx(a, b),
            15 if two => Gate::Cy(a, b),
            16 if two => Gate::Cz(a, b),
            17 | 18 if two && n >= 3 => {
                let d = (0..n).find(|&q| q != a && q != b).unwrap();
                Gate::Ccx(a, b, d)
            }
            _ => Gate::Rz(a, t),
        };
        c.push(g);
    }
    c
}

/// A random input state so that the comparison is not limited to `|0…0⟩`.
pub fn random_input(n: usize, seed: u64) -> StateVector {
    let mut rng = StdRng::seed_from_u64(seed ^ 0x5eed);
    let amps: Vec<_> = (0..1 << n)
        .map(|_| yjunction_core::linalg::c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(n, amps.iter().map(|a| a / norm).collect()).unwrap()
}

fn sorted(mut b: Vec<CircuitBranch>) -> Vec<CircuitBranch> {
    b.sort_by(|x, y| x.clbits.cmp(&y.clbits));
    b
}

/// Largest difference between the branch probabilities and amplitudes of
/// two circuits on the same input; `None` if the branch sets differ.
pub fn branch_distance(a: &Circuit, b: &Circuit, input: &StateVector) -> Option<f64> {
    let x = sorted(enumerate_branches(a, input, &mut Ideal).ok()?);
    let y = sorted(enumerate_branches(b, input, &mut Ideal).ok()?);
    if x.len() != y.len() {
        return None;
    }
    let mut worst = 0.0f64;
    for (p, q) in x.iter().zip(&y) {
        if p.clbits != q.clbits {
            return None;
        }
        worst = worst.max((p.probability - q.probability).abs());
        for (u, v) in p.state.amps().iter().zip(q.state.amps()) {
            worst = worst.max(abs(u - v));
        }
    }
    Some(worst)
}

/// Like [`branch_distance`] but insensitive to a global phase per branch.
pub fn branch_infidelity(a: &Circuit, b: &Circuit, input: &StateVector) -> Option<f64> {
    let x = sorted(enumerate_branches(a, input, &mut Ideal).ok()?);
    let y = sorted(enumerate_branches(b, input, &mut Ideal).ok()?);
    if x.len() != y.len() {
        return None;
    }
    let mut worst = 0.0f64;
    for (p, q) in x.iter().zip(&y) {
        if p.clbits != q.clbits {
            return None;
        }
        worst = worst.max((p.probability - q.probability).abs());
        worst = worst.max(1.0 - p.state.fidelity(&q.state).ok()?);
    }
    Some(worst)
}
