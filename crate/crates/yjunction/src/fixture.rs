//! Human-readable calibration fixture and reference frame tables.
//!
//! The fixture freezes what the library derives at run time: physical
//! representatives of the logical Paulis, recovery operators, gauge
//! readings on every label state and every frame table. `calibrate` writes
//! it and the test suite compares a fresh derivation against the checked-in
//! copy.
//!
//! ```text
//! encoding Y1
//!   recovery +IXII
//!   logical 0 X +IIYZ
//!   gauge 0 W1 -1
//! frames S
//!   closed yes
//!   000 X
//! ```

use std::collections::BTreeMap;
use std::fmt::Write;

use yjunction_core::encoding::{labels_to_string, parse_labels, EncodingId, LogicalEncoding};
use yjunction_core::pauli::{string_expectation, PauliString};
use yjunction_core::protocol::{FrameTable, GateId, GateProtocol, OutcomeString};
use yjunction_core::tomography::process_inputs;

use crate::error::{Error, Result};

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Format { file: "fixture", line, msg: msg.into() }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EncodingSection {
    pub id: EncodingId,
    pub recovery: PauliString,
    /// `(logical qubit, axis letter, physical representative)`.
    pub logical: Vec<(usize, char, PauliString)>,
    /// `(labels, gauge name) ↦ reading`, rounded to −1, 0 or +1 where exact.
    pub gauge: BTreeMap<(String, String), f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameSection {
    pub gate: GateId,
    /// Whether every row is an exact Pauli correction.
    pub closed: bool,
    pub rows: Vec<(OutcomeString, PauliString)>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Fixture {
    pub encodings: Vec<EncodingSection>,
    pub frames: Vec<FrameSection>,
}

fn rounded(x: f64) -> f64 {
    for v in [-1.0, 0.0, 1.0] {
        if (x - v).abs() < 1e-9 {
            return v;
        }
    }
    x
}

fn fmt_value(x: f64) -> String {
    if x == x.trunc() {
        format!("{}", x as i64)
    } else {
        format!("{x:.12}")
    }
}

pub fn encoding_section(id: EncodingId) -> Result<EncodingSection> {
    let enc = LogicalEncoding::new(id);
    let mut logical = Vec::new();
    for q in 0..enc.logical_qubits() {
        for (axis, ch) in ['X', 'Y', 'Z'].into_iter().enumerate() {
            logical.push((q, ch, enc.logical_observable(q, axis)?));
        }
    }
    let mut gauge = BTreeMap::new();
    for labels in process_inputs(enc.logical_qubits()) {
        let st = enc.basis_state(&labels)?;
        for g in enc.gauge_ops() {
            let v = rounded(string_expectation(&st, &g.op)?);
            gauge.insert((labels_to_string(&labels), g.name.to_string()), v);
        }
    }
    Ok(EncodingSection { id, recovery: enc.recovery(), logical, gauge })
}

pub fn frame_section(gate: GateId) -> FrameSection {
    let p = GateProtocol::new(gate);
    FrameSection { gate, closed: p.derive_frame_table().is_ok(), rows: p.frame_table().rows().collect() }
}

/// Derives the full fixture from the library.
pub fn calibrate() -> Result<Fixture> {
    Ok(Fixture {
        encodings: vec![encoding_section(EncodingId::Y1)?, encoding_section(EncodingId::Y2)?],
        frames: GateId::BRAIDS.iter().map(|&g| frame_section(g)).collect(),
    })
}

impl Fixture {
    pub fn to_text(&self) -> String {
        let mut s = String::from("# yjunction calibration fixture\n");
        s.push_str("# outcome strings: last measurement leftmost, 1 = eigenvalue -1\n");
        for e in &self.encodings {
            writeln!(s, "encoding {}", e.id).unwrap();
            writeln!(s, "  recovery {}", e.recovery).unwrap();
            for (q, ch, p) in &e.logical {
                writeln!(s, "  logical {q} {ch} {p}").unwrap();
            }
            for ((labels, name), v) in &e.gauge {
                writeln!(s, "  gauge {labels} {name} {}", fmt_value(*v)).unwrap();
            }
        }
        for f in &self.frames {
            writeln!(s, "frames {}", f.gate).unwrap();
            writeln!(s, "  closed {}", if f.closed { "yes" } else { "no" }).unwrap();
            for (o, c) in &f.rows {
                writeln!(s, "  {o} {}", c.letters_string()).unwrap();
            }
        }
        s
    }

    pub fn parse(text: &str) -> Result<Fixture> {
        let mut fx = Fixture::default();
        enum Cur {
            None,
            Enc,
            Frames,
        }
        let mut cur = Cur::None;
        for (i, raw) in text.lines().enumerate() {
            let ln = i + 1;
            let line = raw.split('#').next().unwrap();
            let words: Vec<&str> = line.split_whitespace().collect();
            if words.is_empty() {
                continue;
            }
            let indented = line.starts_with(' ');
            match (indented, words.as_slice()) {
                (false, ["encoding", id]) => {
                    let id: EncodingId = id.parse().map_err(|e: yjunction_core::Error| err(ln, e.to_string()))?;
                    fx.encodings.push(EncodingSection {
                        id,
                        recovery: PauliString::identity(id.physical_qubits()),
                        logical: vec![],
                        gauge: BTreeMap::new(),
                    });
                    cur = Cur::Enc;
                }
                (false, ["frames", g]) => {
                    let gate: GateId = g.parse().map_err(|e: yjunction_core::Error| err(ln, e.to_string()))?;
                    fx.frames.push(FrameSection { gate, closed: true, rows: vec![] });
                    cur = Cur::Frames;
                }
                (true, _) => match cur {
                    Cur::Enc => parse_enc_line(fx.encodings.last_mut().unwrap(), &words, ln)?,
                    Cur::Frames => parse_frame_line(fx.frames.last_mut().unwrap(), &words, ln)?,
                    Cur::None => return Err(err(ln, "entry outside a section")),
                },
                _ => return Err(err(ln, format!("unexpected {:?}", line.trim()))),
            }
        }
        Ok(fx)
    }
}

fn pauli(s: &str, ln: usize) -> Result<PauliString> {
    s.parse().map_err(|e: yjunction_core::Error| err(ln, e.to_string()))
}

fn parse_enc_line(e: &mut EncodingSection, words: &[&str], ln: usize) -> Result<()> {
    match words {
        ["recovery", p] => e.recovery = pauli(p, ln)?,
        ["logical", q, ch, p] => {
            let q: usize = q.parse().map_err(|_| err(ln, "bad logical qubit"))?;
            let ch = ch.chars().next().filter(|c| "XYZ".contains(*c)).ok_or_else(|| err(ln, "bad axis"))?;
            e.logical.push((q, ch, pauli(p, ln)?));
        }
        ["gauge", labels, name, v] => {
            parse_labels(labels).map_err(|x| err(ln, x.to_string()))?;
            let v: f64 = v.parse().map_err(|_| err(ln, "bad value"))?;
            e.gauge.insert((labels.to_string(), name.to_string()), v);
        }
        _ => return Err(err(ln, format!("unexpected {words:?}"))),
    }
    Ok(())
}

fn parse_frame_line(f: &mut FrameSection, words: &[&str], ln: usize) -> Result<()> {
    match words {
        ["closed", v] => f.closed = *v == "yes",
        [o, letters] => {
            let o: OutcomeString = o.parse().map_err(|e: yjunction_core::Error| err(ln, e.to_string()))?;
            f.rows.push((o, pauli(&format!("+{letters}"), ln)?));
        }
        _ => return Err(err(ln, format!("unexpected {words:?}"))),
    }
    Ok(())
}

/// A reference correction table in its original notation.
#[derive(Debug, Clone, Copy)]
pub struct ReferenceTable {
    pub rows: [(&'static str, &'static str); 8],
    /// The original notation lists the first measurement leftmost and the
    /// second logical qubit's letter first; both strings are reversed
    /// before comparison.
    pub mirrored: bool,
}

const SINGLE_PLAIN: [(&str, &str); 8] =
    [("111", "I"), ("100", "I"), ("101", "Z"), ("110", "Z"), ("000", "X"), ("011", "X"), ("001", "Y"), ("010", "Y")];

const SINGLE_DAGGER: [(&str, &str); 8] =
    [("111", "I"), ("100", "I"), ("101", "Z"), ("110", "Z"), ("000", "Y"), ("011", "Y"), ("001", "X"), ("010", "X")];

const PAIR_PLUS: [(&str, &str); 8] = [
    ("001", "II"),
    ("111", "II"),
    ("000", "IY"),
    ("110", "IY"),
    ("010", "XZ"),
    ("100", "XZ"),
    ("011", "XX"),
    ("101", "XX"),
];

const PAIR_MINUS: [(&str, &str); 8] = [
    ("000", "XZ"),
    ("001", "II"),
    ("010", "IY"),
    ("011", "XX"),
    ("100", "IY"),
    ("101", "XX"),
    ("110", "XZ"),
    ("111", "II"),
];

pub fn reference_table(gate: GateId) -> Option<ReferenceTable> {
    let (rows, mirrored) = match gate {
        GateId::S | GateId::T => (SINGLE_PLAIN, false),
        GateId::Sdg | GateId::Tdg => (SINGLE_DAGGER, false),
        GateId::RxxP => (PAIR_PLUS, true),
        GateId::RxxM => (PAIR_MINUS, true),
        GateId::I => return None,
    };
    Some(ReferenceTable { rows, mirrored })
}

impl ReferenceTable {
    /// Rows in the library convention.
    pub fn normalized(&self) -> Vec<(OutcomeString, String)> {
        self.rows
            .iter()
            .map(|(o, c)| {
                let (o, c) = if self.mirrored {
                    (o.chars().rev().collect::<String>(), c.chars().rev().collect::<String>())
                } else {
                    (o.to_string(), c.to_string())
                };
                (o.parse().expect("static table"), c)
            })
            .collect()
    }
}

/// Row-by-row comparison of a frame table with a reference table.
#[derive(Debug, Clone, PartialEq)]
pub struct RowCheck {
    pub outcome: OutcomeString,
    pub derived: String,
    pub reference: String,
}

impl RowCheck {
    pub fn matches(&self) -> bool {
        self.derived == self.reference
    }
}

pub fn compare_with_reference(gate: GateId, table: &FrameTable) -> Option<Vec<RowCheck>> {
    let r = reference_table(gate)?;
    let mut rows: Vec<RowCheck> = r
        .normalized()
        .into_iter()
        .map(|(o, reference)| RowCheck { outcome: o, derived: table.get(o).letters_string(), reference })
        .collect();
    rows.sort_by_key(|r| r.outcome);
    Some(rows)
}
