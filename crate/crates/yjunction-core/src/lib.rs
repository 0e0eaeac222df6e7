//! Exact statevector simulation of measurement-based geometric gates on
//! Y-junction encoded qubits.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is
//! deterministic given a seed; file formats, the command line and parallel
//! shot execution live in the `yjunction` crate.
//!
//! Conventions used throughout:
//!
//! * qubit 0 is the least significant bit of a basis-state index, and text
//!   forms of Pauli strings and kets list qubit 0 first;
//! * a measurement outcome bit is 1 when the eigenvalue was −1;
//! * outcome strings are printed with the last measurement leftmost, so the
//!   string is the binary form of `Σ bₖ 2ᵏ` where `k` counts measurements.

#![no_std]

extern crate alloc;

pub mod circuit;
pub mod encoding;
pub mod error;
pub mod gate;
pub mod linalg;
pub mod noise;
pub mod pauli;
pub mod protocol;
pub mod rng;
pub mod shots;
pub mod statevector;
pub mod tomography;

pub use error::{Error, Result};
pub use nalgebra::Complex;

/// Complex amplitude type.
pub type C64 = Complex<f64>;

/// Amplitudes below this probability are treated as exactly zero.
pub const ZERO_PROBABILITY: f64 = 1e-12;
