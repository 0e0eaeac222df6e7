//! Measurement-based gates: ordered parity projections on a junction,
//! Pauli-frame tables and conditional logical actions.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use core::fmt;
use core::str::FromStr;

use rand::Rng;

use crate::encoding::{check_codespace, EncodingId, Junction, LogicalEncoding};
use crate::error::{parse_err, Error, Result};
use crate::linalg::{abs, c, cis, matrix_alignment, CMatrix};
use crate::pauli::{Letter, PauliString, PauliSum};
use crate::statevector::{project_raw, MeasurementRecord, Outcome, StateVector};
use crate::{C64, ZERO_PROBABILITY};

/// A projection axis `(θ, φ)` on a junction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementAxis {
    pub theta: f64,
    pub phi: f64,
    pub junction: Junction,
}

impl MeasurementAxis {
    pub fn observable(&self, n: usize) -> Result<PauliSum> {
        self.junction.hamiltonian(n, self.theta, self.phi)
    }

    /// True for the `θ = 0` axis, which reads the gauge-fixing z-check.
    pub fn is_z_check(&self) -> bool {
        libm::sin(self.theta).abs() < 1e-12
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateId {
    /// No measurements: preparation followed directly by tomography.
    I,
    S,
    Sdg,
    T,
    Tdg,
    RxxP,
    RxxM,
}

impl GateId {
    pub const ALL: [GateId; 7] =
        [GateId::I, GateId::S, GateId::Sdg, GateId::T, GateId::Tdg, GateId::RxxP, GateId::RxxM];
    /// The measurement-based gates.
    pub const BRAIDS: [GateId; 6] = [GateId::S, GateId::Sdg, GateId::T, GateId::Tdg, GateId::RxxP, GateId::RxxM];

    pub fn encoding(self) -> EncodingId {
        match self {
            GateId::RxxP | GateId::RxxM => EncodingId::Y2,
            _ => EncodingId::Y1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateId::I => "I",
            GateId::S => "S",
            GateId::Sdg => "Sdg",
            GateId::T => "T",
            GateId::Tdg => "Tdg",
            GateId::RxxP => "RxxP",
            GateId::RxxM => "RxxM",
        }
    }

    /// `(θ, φ)` pairs in measurement order. The opening z-check is left
    /// out: on a code-space input its outcome is certain.
    pub fn sequence(self) -> Vec<(f64, f64)> {
        let x = (FRAC_PI_2, 0.0);
        let y = (FRAC_PI_2, FRAC_PI_2);
        let t = (FRAC_PI_2, FRAC_PI_4);
        let z = (0.0, 0.0);
        match self {
            GateId::I => vec![],
            GateId::S | GateId::RxxM => vec![x, y, z],
            GateId::Sdg | GateId::RxxP => vec![y, x, z],
            GateId::T => vec![x, t, z],
            GateId::Tdg => vec![t, x, z],
        }
    }

    /// The target logical unitary.
    pub fn ideal(self) -> CMatrix {
        match self {
            GateId::I => CMatrix::identity(2, 2),
            GateId::S => rz(FRAC_PI_2),
            GateId::Sdg => rz(-FRAC_PI_2),
            GateId::T => rz(FRAC_PI_4),
            GateId::Tdg => rz(-FRAC_PI_4),
            GateId::RxxP => rxx(FRAC_PI_2),
            GateId::RxxM => rxx(-FRAC_PI_2),
        }
    }

    pub fn dagger(self) -> GateId {
        match self {
            GateId::I => GateId::I,
            GateId::S => GateId::Sdg,
            GateId::Sdg => GateId::S,
            GateId::T => GateId::Tdg,
            GateId::Tdg => GateId::T,
            GateId::RxxP => GateId::RxxM,
            GateId::RxxM => GateId::RxxP,
        }
    }
}

impl fmt::Display for GateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateId {
    type Err = Error;
    fn from_str(s: &str) -> Result<GateId> {
        let g = match s.to_ascii_lowercase().as_str() {
            "i" | "id" | "identity" => GateId::I,
            "s" => GateId::S,
            "sdg" | "s\u{2020}" => GateId::Sdg,
            "t" => GateId::T,
            "tdg" | "t\u{2020}" => GateId::Tdg,
            "rxxp" | "rxx+" => GateId::RxxP,
            "rxxm" | "rxx-" => GateId::RxxM,
            _ => return Err(Error::UnknownLabel(s.to_string())),
        };
        Ok(g)
    }
}

/// `R_z(τ) = e^{−iτZ/2}`.
pub fn rz(tau: f64) -> CMatrix {
    let o = c(0.0, 0.0);
    CMatrix::from_row_slice(2, 2, &[cis(-tau / 2.0), o, o, cis(tau / 2.0)])
}

/// `R_xx(α) = e^{−iα X⊗X/2}`.
pub fn rxx(alpha: f64) -> CMatrix {
    let (co, si) = (libm::cos(alpha / 2.0), libm::sin(alpha / 2.0));
    let mut m = CMatrix::zeros(4, 4);
    for i in 0..4 {
        m[(i, i)] = c(co, 0.0);
        m[(i, 3 - i)] = c(0.0, -si);
    }
    m
}

/// Measurement outcomes; bit `k` is 1 when measurement `k` returned −1.
///
/// Printed with the last measurement leftmost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OutcomeString {
    bits: u8,
    len: u8,
}

impl OutcomeString {
    pub fn new(bits: u8, len: usize) -> OutcomeString {
        assert!(len <= 8 && (len == 8 || bits >> len == 0), "outcome bits fit the length");
        OutcomeString { bits, len: len as u8 }
    }

    pub fn from_bits(measurement_bits: &[u8]) -> OutcomeString {
        let bits = measurement_bits.iter().enumerate().fold(0u8, |acc, (k, b)| acc | (b & 1) << k);
        OutcomeString::new(bits, measurement_bits.len())
    }

    pub fn all(len: usize) -> impl Iterator<Item = OutcomeString> {
        (0..1u16 << len).map(move |b| OutcomeString::new(b as u8, len))
    }

    pub fn bits(&self) -> u8 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Outcome bit of measurement `k`.
    pub fn bit(&self, k: usize) -> u8 {
        self.bits >> k & 1
    }

    pub fn eigenvalue(&self, k: usize) -> i8 {
        if self.bit(k) == 1 {
            -1
        } else {
            1
        }
    }

    /// The same outcomes printed first-measurement-leftmost.
    pub fn mirrored_text(&self) -> String {
        self.to_string().chars().rev().collect()
    }
}

impl fmt::Display for OutcomeString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in (0..self.len()).rev() {
            write!(f, "{}", self.bit(k))?;
        }
        Ok(())
    }
}

impl FromStr for OutcomeString {
    type Err = Error;
    fn from_str(s: &str) -> Result<OutcomeString> {
        let s = s.trim();
        if s.is_empty() || s.len() > 8 {
            return Err(parse_err("outcome string", s));
        }
        let mut bits = 0u8;
        for (k, ch) in s.chars().rev().enumerate() {
            match ch {
                '0' => {}
                '1' => bits |= 1 << k,
                _ => return Err(parse_err("outcome string", s)),
            }
        }
        Ok(OutcomeString::new(bits, s.len()))
    }
}

/// Logical Pauli correction per outcome string.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameTable {
    len: usize,
    entries: Vec<PauliString>,
}

impl FrameTable {
    pub fn new(len: usize, entries: Vec<PauliString>) -> Result<FrameTable> {
        if entries.len() != 1 << len {
            return Err(Error::LengthMismatch(1 << len, entries.len()));
        }
        Ok(FrameTable { len, entries })
    }

    pub fn get(&self, outcome: OutcomeString) -> PauliString {
        self.entries[outcome.bits() as usize]
    }

    pub fn rows(&self) -> impl Iterator<Item = (OutcomeString, PauliString)> + '_ {
        OutcomeString::all(self.len).map(move |o| (o, self.get(o)))
    }

    pub fn outcome_len(&self) -> usize {
        self.len
    }
}

/// A gate as an ordered projection sequence with its Pauli frame.
#[derive(Debug, Clone)]
pub struct GateProtocol {
    name: String,
    encoding: LogicalEncoding,
    axes: Vec<MeasurementAxis>,
    ideal: CMatrix,
    frame_table: FrameTable,
    /// Best alignment `|tr(U†CM)|²/d²` reached per outcome string.
    frame_quality: Vec<f64>,
}

/// Alignment above which a correction counts as exact.
pub const PAULI_CLOSURE_TOL: f64 = 1e-9;

impl GateProtocol {
    pub fn new(gate: GateId) -> GateProtocol {
        let enc = LogicalEncoding::new(gate.encoding());
        GateProtocol::custom(gate.name(), enc, &gate.sequence(), gate.ideal())
    }

    /// Geometric `R_z(τ)` on `Y1`: x-check, then the `φ = τ` check, then
    /// the z-check.
    pub fn rz(tau: f64) -> GateProtocol {
        let enc = LogicalEncoding::y1();
        let seq = [(FRAC_PI_2, 0.0), (FRAC_PI_2, tau), (0.0, 0.0)];
        GateProtocol::custom(&format!("Rz({tau})"), enc, &seq, rz(tau))
    }

    pub fn custom(name: &str, encoding: LogicalEncoding, seq: &[(f64, f64)], ideal: CMatrix) -> GateProtocol {
        let junction = encoding.junction();
        let axes = seq.iter().map(|&(theta, phi)| MeasurementAxis { theta, phi, junction }).collect();
        let mut p = GateProtocol {
            name: name.to_string(),
            encoding,
            axes,
            ideal,
            frame_table: FrameTable { len: 0, entries: vec![] },
            frame_quality: vec![],
        };
        let (table, quality) = p.best_frame_table();
        p.frame_table = table;
        p.frame_quality = quality;
        p
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn encoding(&self) -> &LogicalEncoding {
        &self.encoding
    }

    pub fn axes(&self) -> &[MeasurementAxis] {
        &self.axes
    }

    pub fn ideal(&self) -> &CMatrix {
        &self.ideal
    }

    /// Best available Pauli frame (exact where the gate is Pauli-closed).
    pub fn frame_table(&self) -> &FrameTable {
        &self.frame_table
    }

    pub fn frame_quality(&self) -> &[f64] {
        &self.frame_quality
    }

    pub fn outcomes(&self) -> impl Iterator<Item = OutcomeString> {
        OutcomeString::all(self.axes.len())
    }

    fn observables(&self) -> Vec<PauliSum> {
        let n = self.encoding.physical_qubits();
        self.axes.iter().map(|a| a.observable(n).expect("junction qubits in range")).collect()
    }

    /// Whether this outcome string leaves the gauge-fixed sector, so the
    /// recovery Pauli is applied.
    pub fn needs_recovery(&self, outcome: OutcomeString) -> bool {
        match self.axes.last() {
            Some(a) if a.is_z_check() => outcome.eigenvalue(self.axes.len() - 1) == 1,
            _ => false,
        }
    }

    /// `Π|ψ⟩` for the projector product of one outcome string, followed by
    /// the recovery Pauli when the branch left the sector. Unnormalized.
    pub fn branch_apply(&self, amps: &[C64], outcome: OutcomeString) -> Vec<C64> {
        let mut v = amps.to_vec();
        for (k, obs) in self.observables().iter().enumerate() {
            v = project_raw(&v, obs, outcome.eigenvalue(k));
        }
        if self.needs_recovery(outcome) {
            let mut out = vec![C64::new(0.0, 0.0); v.len()];
            self.encoding.recovery().apply_add(&v, C64::new(1.0, 0.0), &mut out);
            v = out;
        }
        v
    }

    /// Unnormalized logical matrix `M_ab = ⟨a_L|R·Π|b_L⟩`.
    pub fn raw_logical_action(&self, outcome: OutcomeString) -> Result<CMatrix> {
        self.check_outcome(outcome)?;
        let basis = self.encoding.computational_basis();
        let d = basis.len();
        let mut m = CMatrix::zeros(d, d);
        for (b, ket) in basis.iter().enumerate() {
            let out = self.branch_apply(ket.amps(), outcome);
            for (a, bra) in basis.iter().enumerate() {
                m[(a, b)] = bra.amps().iter().zip(&out).map(|(x, y)| x.conj() * y).sum();
            }
        }
        Ok(m)
    }

    /// The logical action of an outcome string scaled to unit determinant
    /// magnitude.
    pub fn conditional_logical_action(&self, outcome: OutcomeString) -> Result<CMatrix> {
        let m = self.raw_logical_action(outcome)?;
        let d = m.nrows();
        let det = abs(m.determinant());
        if det <= ZERO_PROBABILITY {
            return Err(Error::ZeroProbability(det));
        }
        let k = libm::pow(det, 1.0 / d as f64);
        Ok(m / c(k, 0.0))
    }

    fn check_outcome(&self, outcome: OutcomeString) -> Result<()> {
        if outcome.len() != self.axes.len() {
            return Err(Error::LengthMismatch(self.axes.len(), outcome.len()));
        }
        Ok(())
    }

    /// Alignment of `C·M` with the ideal gate for a candidate correction `C`
    /// of `outcome`; 1 exactly when `C` is an exact Pauli frame.
    pub fn frame_alignment(&self, outcome: OutcomeString, correction: &PauliString) -> Result<f64> {
        let m = self.conditional_logical_action(outcome)?;
        let cm = LogicalEncoding::logical_matrix(correction) * &m;
        Ok(matrix_alignment(&self.ideal, &cm))
    }

    /// For each outcome, the logical Pauli `C` maximizing the alignment of
    /// `C·M` with the ideal gate, ties resolved in `I, X, Y, Z` order.
    pub fn best_frame_table(&self) -> (FrameTable, Vec<f64>) {
        let k = self.encoding.logical_qubits();
        let paulis = logical_paulis(k);
        let mut entries = Vec::new();
        let mut quality = Vec::new();
        for o in self.outcomes() {
            let m = self.conditional_logical_action(o).expect("every branch has nonzero weight");
            let mut best = (f64::NEG_INFINITY, paulis[0]);
            for p in &paulis {
                let cm = LogicalEncoding::logical_matrix(p) * &m;
                let f = matrix_alignment(&self.ideal, &cm);
                if f > best.0 + 1e-12 {
                    best = (f, *p);
                }
            }
            quality.push(best.0);
            entries.push(best.1);
        }
        (FrameTable { len: self.axes.len(), entries }, quality)
    }

    /// The exact Pauli frame, or the outcome strings for which none exists.
    pub fn derive_frame_table(&self) -> Result<FrameTable> {
        let bad: Vec<String> = self
            .outcomes()
            .zip(&self.frame_quality)
            .filter(|(_, &q)| q < 1.0 - PAULI_CLOSURE_TOL)
            .map(|(o, _)| o.to_string())
            .collect();
        if bad.is_empty() {
            Ok(self.frame_table.clone())
        } else {
            Err(Error::NotPauliClosed(bad))
        }
    }

    /// Runs the projection sequence on a code-space state.
    pub fn run<R: Rng + ?Sized>(&self, state: &StateVector, mode: Mode<'_, R>) -> Result<ProtocolRun> {
        let report = check_codespace(state, &self.encoding)?;
        if !report.in_codespace() {
            return Err(Error::OutsideCodespace(report.summary()));
        }
        let mut post = state.clone();
        let mut records = Vec::with_capacity(self.axes.len());
        let mut bits = Vec::with_capacity(self.axes.len());
        let (mut rng, forced) = match mode {
            Mode::Sampled(r) => (Some(r), None),
            Mode::Forced(o) => {
                self.check_outcome(o)?;
                (None, Some(o))
            }
        };
        for (k, obs) in self.observables().iter().enumerate() {
            let rec = match (&mut rng, forced) {
                (Some(r), _) => post.measure(obs, Outcome::Sample(&mut **r))?,
                (None, Some(o)) => post.measure::<R>(obs, Outcome::Force(o.eigenvalue(k)))?,
                (None, None) => unreachable!(),
            };
            bits.push(rec.bit());
            records.push(rec);
        }
        let outcome = OutcomeString::from_bits(&bits);
        self.finish(post, outcome, records)
    }

    /// Applies the recovery (when the recorded outcome calls for it) and the
    /// frame correction to a physical state.
    pub fn correct_physical(&self, state: &mut StateVector, outcome: OutcomeString) -> Result<PauliString> {
        self.check_outcome(outcome)?;
        if self.needs_recovery(outcome) {
            state.apply_pauli(&self.encoding.recovery())?;
        }
        let correction = self.frame_table.get(outcome);
        state.apply_pauli(&self.encoding.physical_pauli(&correction)?)?;
        Ok(correction)
    }

    fn finish(
        &self,
        mut post: StateVector,
        outcome: OutcomeString,
        records: Vec<MeasurementRecord>,
    ) -> Result<ProtocolRun> {
        if self.needs_recovery(outcome) {
            post.apply_pauli(&self.encoding.recovery())?;
        }
        let probability = records.iter().map(|r| r.probability).product();
        let correction = self.frame_table.get(outcome);
        let mut corrected = post.clone();
        corrected.apply_pauli(&self.encoding.physical_pauli(&correction)?)?;
        Ok(ProtocolRun { outcome, records, post, correction, corrected, probability })
    }
}

/// How [`GateProtocol::run`] chooses outcomes.
pub enum Mode<'a, R: Rng + ?Sized> {
    Sampled(&'a mut R),
    Forced(OutcomeString),
}

#[derive(Debug, Clone)]
pub struct ProtocolRun {
    pub outcome: OutcomeString,
    pub records: Vec<MeasurementRecord>,
    /// Renormalized post-measurement state, returned to the code space.
    pub post: StateVector,
    pub correction: PauliString,
    /// `post` with the frame correction applied.
    pub corrected: StateVector,
    /// Probability of this outcome string.
    pub probability: f64,
}

/// All `4ᵏ` logical Pauli strings with phase +1, in `I, X, Y, Z` order with
/// logical qubit 0 varying slowest.
pub fn logical_paulis(k: usize) -> Vec<PauliString> {
    let mut out = vec![];
    for code in 0..(1usize << (2 * k)) {
        let letters: Vec<Letter> = (0..k).map(|q| Letter::ALL[code >> (2 * (k - 1 - q)) & 3]).collect();
        out.push(PauliString::from_letters(&letters).expect("k ≤ 2"));
    }
    out
}

/// One outcome branch of a protocol applied to a fixed input.
#[derive(Debug, Clone)]
pub struct Branch {
    pub outcome: OutcomeString,
    pub probability: f64,
    /// Post-measurement state after recovery and frame correction.
    pub corrected: StateVector,
    pub correction: PauliString,
}

impl GateProtocol {
    /// Every outcome branch with nonzero probability.
    pub fn branches(&self, state: &StateVector) -> Result<Vec<Branch>> {
        let mut out = Vec::new();
        for o in self.outcomes() {
            match self.run::<crate::rng::StreamRng>(state, Mode::Forced(o)) {
                Ok(r) => out.push(Branch {
                    outcome: r.outcome,
                    probability: r.probability,
                    corrected: r.corrected,
                    correction: r.correction,
                }),
                Err(Error::ZeroProbability(_)) => {}
                Err(e) => return Err(e),
            }
        }
        Ok(out)
    }
}
