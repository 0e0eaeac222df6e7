//! `key = value` noise configuration files.
//!
//! ```text
//! # defaults for a superconducting device
//! p1 = 2.862e-4
//! p2 = 3.671e-3
//! p_ro = 2.417e-2
//! p_idle = 5.78e-3
//! ```
//!
//! Keys that are left out take their value from [`NoiseModel::default`],
//! unless the file starts from `base = none`, in which case they are zero.
//! `p_idle` may instead be given as `idle_window` and `coherence_time`.

use std::path::Path;

use yjunction_core::noise::NoiseModel;

use crate::error::{Error, Result};

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Format { file: "noise config", line, msg: msg.into() }
}

pub fn parse_noise(text: &str) -> Result<NoiseModel> {
    let mut m = NoiseModel::default();
    let mut window = None;
    let mut coherence = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| err(line_no, "expected key = value"))?;
        let key = key.trim();
        let value = value.trim();
        if key == "base" {
            match value {
                "none" => m = NoiseModel::NONE,
                "default" => m = NoiseModel::default(),
                _ => return Err(err(line_no, format!("unknown base {value:?}"))),
            }
            continue;
        }
        let v: f64 = value.parse().map_err(|_| err(line_no, format!("bad number {value:?}")))?;
        match key {
            "p1" => m.p1 = v,
            "p2" => m.p2 = v,
            "p_ro" | "p_readout" => m.p_readout = v,
            "p_idle" => m.p_idle = v,
            "idle_window" => window = Some(v),
            "coherence_time" => coherence = Some(v),
            _ => return Err(err(line_no, format!("unknown key {key:?}"))),
        }
    }
    match (window, coherence) {
        (Some(w), Some(t)) => m.p_idle = NoiseModel::idle_from_times(w, t),
        (None, None) => {}
        _ => return Err(err(0, "idle_window and coherence_time must be given together")),
    }
    m.validate().map_err(|e| err(0, e.to_string()))?;
    Ok(m)
}

pub fn load_noise(path: &Path) -> Result<NoiseModel> {
    parse_noise(&std::fs::read_to_string(path)?)
}

/// Text form accepted by [`parse_noise`].
pub fn format_noise(m: &NoiseModel) -> String {
    format!("base = none\np1 = {:e}\np2 = {:e}\np_ro = {:e}\np_idle = {:e}\n", m.p1, m.p2, m.p_readout, m.p_idle)
}
