//! Pauli strings with exact phases and real-weighted sums of them.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Mul;
use core::str::FromStr;

use crate::error::{parse_err, Error, Result};
use crate::statevector::StateVector;
use crate::C64;

/// Largest register a [`PauliString`] can describe.
pub const MAX_PAULI_QUBITS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::I, Letter::X, Letter::Y, Letter::Z];

    fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Letter {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c.to_ascii_uppercase() {
            'I' => Some(Letter::I),
            'X' => Some(Letter::X),
            'Y' => Some(Letter::Y),
            'Z' => Some(Letter::Z),
            _ => None,
        }
    }

    /// The 2×2 matrix, row-major.
    pub fn matrix(self) -> [[C64; 2]; 2] {
        let o = C64::new(0.0, 0.0);
        let l = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        match self {
            Letter::I => [[l, o], [o, l]],
            Letter::X => [[o, l], [l, o]],
            Letter::Y => [[o, -i], [i, o]],
            Letter::Z => [[l, o], [o, -l]],
        }
    }
}

/// A power of `i`: `+1, +i, −1, −i` for exponents `0..4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(k: i32) -> Phase {
        Phase(k.rem_euclid(4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }

    /// `+1.0` or `−1.0` for real phases.
    pub fn sign(self) -> Option<f64> {
        match self.0 {
            0 => Some(1.0),
            2 => Some(-1.0),
            _ => None,
        }
    }

    pub fn to_complex(self) -> C64 {
        match self.0 {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        }
    }
}

impl Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

/// An n-qubit Pauli operator `phase · P₀ ⊗ P₁ ⊗ …`.
///
/// Stored as symplectic bit masks: bit `q` of `x`/`z` marks an X/Z
/// component on qubit `q`, and both bits together mean Y.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    n: usize,
    x: u32,
    z: u32,
    phase: Phase,
}

impl PauliString {
    pub fn identity(n: usize) -> PauliString {
        assert!(n <= MAX_PAULI_QUBITS, "at most {MAX_PAULI_QUBITS} qubits");
        PauliString { n, x: 0, z: 0, phase: Phase::ONE }
    }

    /// Builds a string from `(qubit, letter)` pairs; unlisted qubits are I.
    pub fn from_sparse(n: usize, letters: &[(usize, Letter)]) -> Result<PauliString> {
        if n > MAX_PAULI_QUBITS {
            return Err(Error::TooManyQubits(n, MAX_PAULI_QUBITS));
        }
        let mut p = PauliString::identity(n);
        for &(q, l) in letters {
            if q >= n {
                return Err(Error::QubitOutOfRange { index: q, n });
            }
            if p.letter(q) != Letter::I {
                return Err(Error::RepeatedQubit(q));
            }
            p.set_letter(q, l);
        }
        Ok(p)
    }

    pub fn from_letters(letters: &[Letter]) -> Result<PauliString> {
        let pairs: Vec<(usize, Letter)> = letters.iter().copied().enumerate().collect();
        PauliString::from_sparse(letters.len(), &pairs)
    }

    /// Single-qubit letter `l` on qubit `q`.
    pub fn single(n: usize, q: usize, l: Letter) -> Result<PauliString> {
        PauliString::from_sparse(n, &[(q, l)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn x_mask(&self) -> u32 {
        self.x
    }

    pub fn z_mask(&self) -> u32 {
        self.z
    }

    pub fn with_phase(mut self, phase: Phase) -> PauliString {
        self.phase = phase;
        self
    }

    pub fn negated(self) -> PauliString {
        let phase = self.phase * Phase::MINUS_ONE;
        self.with_phase(phase)
    }

    pub fn letter(&self, q: usize) -> Letter {
        Letter::from_bits(self.x >> q & 1 == 1, self.z >> q & 1 == 1)
    }

    pub fn letters(&self) -> Vec<Letter> {
        (0..self.n).map(|q| self.letter(q)).collect()
    }

    fn set_letter(&mut self, q: usize, l: Letter) {
        let (xb, zb) = l.bits();
        let m = 1u32 << q;
        self.x = (self.x & !m) | if xb { m } else { 0 };
        self.z = (self.z & !m) | if zb { m } else { 0 };
    }

    /// Qubits carrying a non-identity letter.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&q| (self.x | self.z) >> q & 1 == 1).collect()
    }

    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_real()
    }

    /// Letters only, qubit 0 first, e.g. `"ZZII"`.
    pub fn letters_string(&self) -> String {
        self.letters().iter().map(|l| l.as_char()).collect()
    }

    /// Product `self · rhs` with the accumulated phase.
    pub fn mul(&self, rhs: &PauliString) -> Result<PauliString> {
        if self.n != rhs.n {
            return Err(Error::LengthMismatch(self.n, rhs.n));
        }
        let mut k: i32 = 0;
        for q in 0..self.n {
            k += phase_exponent(self.letter(q), rhs.letter(q));
        }
        Ok(PauliString {
            n: self.n,
            x: self.x ^ rhs.x,
            z: self.z ^ rhs.z,
            phase: self.phase * rhs.phase * Phase::from_exponent(k),
        })
    }

    pub fn commutes(&self, rhs: &PauliString) -> Result<bool> {
        if self.n != rhs.n {
            return Err(Error::LengthMismatch(self.n, rhs.n));
        }
        Ok(((self.x & rhs.z) ^ (self.z & rhs.x)).count_ones().is_multiple_of(2))
    }

    /// Tensor product `self ⊗ rhs`; `rhs` occupies the higher qubit indices.
    pub fn tensor(&self, rhs: &PauliString) -> Result<PauliString> {
        let n = self.n + rhs.n;
        if n > MAX_PAULI_QUBITS {
            return Err(Error::TooManyQubits(n, MAX_PAULI_QUBITS));
        }
        Ok(PauliString { n, x: self.x | rhs.x << self.n, z: self.z | rhs.z << self.n, phase: self.phase * rhs.phase })
    }

    /// Image of basis state `b`: `P|b⟩ = factor · |b ^ x⟩`.
    #[inline]
    pub fn act_on_basis(&self, b: usize) -> (usize, C64) {
        let ny = (self.x & self.z).count_ones() as i32;
        let minus = ((b as u32) & self.z).count_ones() % 2 == 1;
        let mut f = (self.phase * Phase::from_exponent(ny)).to_complex();
        if minus {
            f = -f;
        }
        (b ^ self.x as usize, f)
    }

    /// `out += coeff · P · amps`.
    pub fn apply_add(&self, amps: &[C64], coeff: C64, out: &mut [C64]) {
        let ny = (self.x & self.z).count_ones() as i32;
        let base = (self.phase * Phase::from_exponent(ny)).to_complex() * coeff;
        let xm = self.x as usize;
        let zm = self.z as usize;
        for (b, a) in amps.iter().enumerate() {
            let f = if (b & zm).count_ones() % 2 == 1 { -base } else { base };
            out[b ^ xm] += f * a;
        }
    }

    /// Dense `2ⁿ × 2ⁿ` matrix; intended for small test oracles.
    pub fn to_matrix(&self) -> crate::linalg::CMatrix {
        let d = 1usize << self.n;
        let mut m = crate::linalg::CMatrix::zeros(d, d);
        for b in 0..d {
            let (r, f) = self.act_on_basis(b);
            m[(r, b)] = f;
        }
        m
    }
}

/// Exponent of `i` in the single-qubit product `a·b`.
fn phase_exponent(a: Letter, b: Letter) -> i32 {
    use Letter::*;
    match (a, b) {
        (X, Y) | (Y, Z) | (Z, X) => 1,
        (Y, X) | (Z, Y) | (X, Z) => -1,
        _ => 0,
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = match self.phase.0 {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{p}{}", self.letters_string())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Accepts an optional `+`, `-`, `+i`, `-i` or `i` prefix (the Unicode
    /// minus sign is allowed) followed by letters, qubit 0 first.
    fn from_str(s: &str) -> Result<PauliString> {
        let s = s.trim();
        let (neg, rest) = strip_sign(s);
        let (imag, rest) = match rest.strip_prefix('i') {
            Some(r) => (true, r),
            None => (false, rest),
        };
        let mut letters = Vec::new();
        for c in rest.chars() {
            letters.push(Letter::from_char(c).ok_or_else(|| parse_err("Pauli string", format!("{s:?}")))?);
        }
        if letters.is_empty() {
            return Err(parse_err("Pauli string", format!("{s:?} has no letters")));
        }
        let k = if neg { 2 } else { 0 } + if imag { 1 } else { 0 };
        Ok(PauliString::from_letters(&letters)?.with_phase(Phase::from_exponent(k)))
    }
}

fn strip_sign(s: &str) -> (bool, &str) {
    if let Some(r) = s.strip_prefix('+') {
        (false, r)
    } else if let Some(r) = s.strip_prefix('-') {
        (true, r)
    } else if let Some(r) = s.strip_prefix('\u{2212}') {
        (true, r)
    } else {
        (false, s)
    }
}

/// A real-weighted sum of Hermitian Pauli strings.
///
/// Signs are folded into the coefficients, so every stored string has phase
/// `+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n: usize,
    terms: Vec<(f64, PauliString)>,
}

impl PauliSum {
    pub fn new(n: usize, terms: Vec<(f64, PauliString)>) -> Result<PauliSum> {
        let mut out = Vec::with_capacity(terms.len());
        for (c, p) in terms {
            if p.n() != n {
                return Err(Error::LengthMismatch(n, p.n()));
            }
            let sign = p.phase().sign().ok_or_else(|| Error::NonHermitian(format!("{p}")))?;
            if !c.is_finite() {
                return Err(Error::NonHermitian(format!("coefficient {c}")));
            }
            out.push((c * sign, p.with_phase(Phase::ONE)));
        }
        Ok(PauliSum { n, terms: out })
    }

    pub fn from_string(p: PauliString) -> Result<PauliSum> {
        PauliSum::new(p.n(), vec![(1.0, p)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    /// The signed string when the sum is a single term with weight ±1.
    pub fn as_single(&self) -> Option<PauliString> {
        match self.terms.as_slice() {
            [(c, p)] if (c.abs() - 1.0).abs() < 1e-12 => Some(if *c < 0.0 { p.negated() } else { *p }),
            _ => None,
        }
    }

    /// `out = self · amps`.
    pub fn apply(&self, amps: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); amps.len()];
        for (c, p) in &self.terms {
            p.apply_add(amps, C64::new(*c, 0.0), &mut out);
        }
        out
    }

    /// `self²` with like terms collected; coefficients may be complex.
    pub fn square(&self) -> BTreeMap<(u32, u32), C64> {
        let mut acc: BTreeMap<(u32, u32), C64> = BTreeMap::new();
        for (a, pa) in &self.terms {
            for (b, pb) in &self.terms {
                let prod = pa.mul(pb).expect("terms share a register");
                let e = acc.entry((prod.x, prod.z)).or_insert(C64::new(0.0, 0.0));
                *e += prod.phase().to_complex() * (a * b);
            }
        }
        acc
    }

    /// True when `self² = I` up to `tol` on every collected coefficient.
    pub fn is_involution(&self, tol: f64) -> bool {
        self.square().iter().all(|(&(x, z), c)| {
            let target = if x == 0 && z == 0 { 1.0 } else { 0.0 };
            (c.re - target).abs() <= tol && c.im.abs() <= tol
        })
    }

    /// `⟨ψ|self|ψ⟩`.
    pub fn expectation(&self, state: &StateVector) -> Result<f64> {
        expectation(state, self)
    }

    pub fn to_matrix(&self) -> crate::linalg::CMatrix {
        let d = 1usize << self.n;
        let mut m = crate::linalg::CMatrix::zeros(d, d);
        for (c, p) in &self.terms {
            m += p.to_matrix() * C64::new(*c, 0.0);
        }
        m
    }
}

/// `⟨ψ|obs|ψ⟩` for a Hermitian sum.
pub fn expectation(state: &StateVector, obs: &PauliSum) -> Result<f64> {
    if state.n() != obs.n() {
        return Err(Error::LengthMismatch(state.n(), obs.n()));
    }
    let amps = state.amps();
    let mut total = 0.0;
    for (c, p) in obs.terms() {
        let mut acc = C64::new(0.0, 0.0);
        for (b, a) in amps.iter().enumerate() {
            let (r, f) = p.act_on_basis(b);
            acc += amps[r].conj() * f * a;
        }
        total += c * acc.re;
    }
    Ok(total)
}

/// `⟨ψ|P|ψ⟩` for a single Hermitian string.
pub fn string_expectation(state: &StateVector, p: &PauliString) -> Result<f64> {
    if !p.is_hermitian() {
        return Err(Error::NonHermitian(format!("{p}")));
    }
    expectation(state, &PauliSum::from_string(*p)?)
}

impl fmt::Display for PauliSum {
    /// `"-1*YIYI + 0.707*XIIX"`; an empty sum prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (c, p)) in self.terms.iter().enumerate() {
            if k == 0 {
                write!(f, "{c}*{}", p.letters_string())?;
            } else if *c < 0.0 {
                write!(f, " - {}*{}", -c, p.letters_string())?;
            } else {
                write!(f, " + {c}*{}", p.letters_string())?;
            }
        }
        Ok(())
    }
}

impl FromStr for PauliSum {
    type Err = Error;

    fn from_str(s: &str) -> Result<PauliSum> {
        let mut terms: Vec<(f64, PauliString)> = Vec::new();
        let mut sign = 1.0;
        let mut expect_term = true;
        for tok in s.split_whitespace() {
            match tok {
                "+" if !expect_term => {
                    sign = 1.0;
                    expect_term = true;
                }
                "-" | "\u{2212}" if !expect_term => {
                    sign = -1.0;
                    expect_term = true;
                }
                _ if expect_term => {
                    let (c, p) = parse_term(tok)?;
                    terms.push((sign * c, p));
                    expect_term = false;
                }
                _ => return Err(parse_err("Pauli sum", format!("unexpected {tok:?} in {s:?}"))),
            }
        }
        if expect_term {
            return Err(parse_err("Pauli sum", format!("{s:?} is incomplete")));
        }
        let n = terms[0].1.n();
        PauliSum::new(n, terms)
    }
}

fn parse_term(tok: &str) -> Result<(f64, PauliString)> {
    match tok.split_once('*') {
        Some((c, p)) => {
            let c = c.replace('\u{2212}', "-");
            let c: f64 = c.parse().map_err(|_| parse_err("coefficient", tok))?;
            Ok((c, p.parse()?))
        }
        None => Ok((1.0, tok.parse()?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn xy_is_iz() {
        assert_eq!(p("X").mul(&p("Y")).unwrap(), p("+iZ"));
    }

    #[test]
    fn zz_times_yy() {
        assert_eq!(p("ZZ").mul(&p("YY")).unwrap(), p("-XX"));
    }

    #[test]
    fn involution() {
        let a = p("-XYZI");
        let sq = a.mul(&a).unwrap();
        assert!(sq.is_identity());
        assert_eq!(sq.phase(), Phase::ONE);
    }

    #[test]
    fn commutation_examples() {
        assert!(p("ZIXY").commutes(&p("XYZI")).unwrap());
        assert!(!p("ZZI").commutes(&p("YIY")).unwrap());
        assert!(p("XYZ").commutes(&p("XYZ")).unwrap());
    }

    #[test]
    fn length_mismatch() {
        assert_eq!(p("XX").mul(&p("X")), Err(Error::LengthMismatch(2, 1)));
        assert!(p("XX").commutes(&p("X")).is_err());
    }

    #[test]
    fn text_round_trip() {
        for s in ["+ZZII", "-YIYI", "+iX", "-iXYZ"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert_eq!(p("\u{2212}Z"), p("-Z"));
        assert!("+Q".parse::<PauliString>().is_err());
    }

    #[test]
    fn sum_text_round_trip() {
        let s: PauliSum = "\u{2212}1.0*YIYI + 0.707*XIIX".parse().unwrap();
        assert_eq!(s.terms()[0].0, -1.0);
        let again: PauliSum = s.to_string().parse().unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn complex_terms_rejected() {
        assert!(PauliSum::new(1, vec![(1.0, p("+iX"))]).is_err());
    }
}
