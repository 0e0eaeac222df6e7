//! Logical process tomography of a gate protocol.
//!
//! For every input label state the gate circuit is sampled under all `3ᵏ`
//! logical readout settings, the shots are reconstructed per recorded
//! outcome string, frame corrected and mixed. With all `4ᵏ` inputs the
//! outputs are combined into a Choi matrix and compared with the ideal gate.
//!
//! Each (input, setting) block draws from its own measurement and noise
//! streams, so results only depend on the seed.

use std::collections::HashMap;

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;

use yjunction_core::circuit::{protocol_circuit, simulate, Circuit, CircuitBranch, Sampling};
use yjunction_core::encoding::{labels_to_string, EncodingId, Label, LogicalEncoding};
use yjunction_core::linalg::CMatrix;
use yjunction_core::noise::{sample_faults, Fault, FaultChannel, NoiseModel};
use yjunction_core::pauli::PauliString;
use yjunction_core::protocol::{GateId, GateProtocol};
use yjunction_core::rng::{counter, stream, Purpose};
use yjunction_core::shots::{exact_corrected_state, sample_shot, settings, BranchTable, Counts};
use yjunction_core::statevector::StateVector;
use yjunction_core::tomography::{
    apply_unitary, average_gate_fidelity, choi_from_outputs, label_vector, process_fidelity, process_inputs,
    DensityMatrix,
};

use crate::error::Result;
use crate::qasm::lower;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Finite shots.
    Sampled,
    /// Infinite-shot limit. Only readout noise is supported.
    Exact,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub gate: GateId,
    /// Encoding override, only meaningful for the identity.
    pub encoding: Option<EncodingId>,
    /// Input label states. `None` runs every process-tomography input and
    /// reports the process fidelity.
    pub inputs: Option<Vec<Vec<Label>>>,
    /// Shots per setting per input.
    pub shots: usize,
    pub seed: u64,
    pub mode: Mode,
    pub noise: NoiseModel,
    /// Bootstrap resamples for error bars; 0 disables them.
    pub bootstrap: usize,
}

impl RunConfig {
    pub fn new(gate: GateId) -> RunConfig {
        RunConfig {
            gate,
            encoding: None,
            inputs: None,
            shots: 32768,
            seed: 0,
            mode: Mode::Sampled,
            noise: NoiseModel::NONE,
            bootstrap: 50,
        }
    }

    pub fn protocol(&self) -> GateProtocol {
        match (self.gate, self.encoding) {
            (GateId::I, Some(id)) if id != GateId::I.encoding() => {
                let d = id.dim();
                GateProtocol::custom("I", LogicalEncoding::new(id), &[], CMatrix::identity(d, d))
            }
            (g, _) => GateProtocol::new(g),
        }
    }
}

#[derive(Debug, Clone)]
pub struct InputResult {
    pub labels: Vec<Label>,
    pub rho: DensityMatrix,
    pub fidelity: f64,
    pub fidelity_stderr: f64,
    /// `(logical Pauli, ⟨P⟩ of the corrected state, standard error)`.
    pub expectations: Vec<(PauliString, f64, f64)>,
    /// Depth of the circuit lowered to the hardware basis.
    pub depth: usize,
}

#[derive(Debug, Clone)]
pub struct ProcessResult {
    pub choi: CMatrix,
    pub fidelity: f64,
    pub stderr: f64,
    pub average_gate_fidelity: f64,
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub config: RunConfig,
    pub encoding: EncodingId,
    pub inputs: Vec<InputResult>,
    pub process: Option<ProcessResult>,
}

impl ExperimentResult {
    pub fn average_depth(&self) -> f64 {
        self.inputs.iter().map(|r| r.depth as f64).sum::<f64>() / self.inputs.len() as f64
    }
}

/// Shot counts of one input, all settings. The table cache is keyed by the
/// fault pattern; patterns with more than one fault are rare and run as
/// single trajectories instead.
pub fn sample_counts(
    circuit: &Circuit,
    enc: &LogicalEncoding,
    noise: &NoiseModel,
    shots: usize,
    seed: u64,
    input_index: usize,
) -> Result<Counts> {
    let k = enc.logical_qubits();
    let mut counts = Counts::new(k, circuit.n_clbits);
    let mut cache: HashMap<Vec<Fault>, BranchTable> = HashMap::new();
    cache.insert(vec![], BranchTable::compute(circuit, enc, &[])?);
    for (si, setting) in settings(k).iter().enumerate() {
        let ctr = counter(((input_index as u64) << 8) | si as u64, 0);
        let mut meas = stream(seed, Purpose::Measurement, ctr);
        let mut nrng = stream(seed, Purpose::Noise, ctr);
        for _ in 0..shots {
            let faults = sample_faults(circuit, noise, &mut nrng);
            let shot = if faults.len() > 1 {
                let run = simulate(
                    circuit,
                    &StateVector::zero(circuit.n_qubits)?,
                    Sampling::Born(&mut meas),
                    &mut FaultChannel::new(&faults),
                )?;
                let b = CircuitBranch { clbits: run.clbits, probability: 1.0, state: run.state };
                let table = BranchTable::from_branches(enc, circuit.n_clbits, &[b])?;
                sample_shot(&table, setting, noise.p_readout, &mut meas, &mut nrng)
            } else {
                if !cache.contains_key(&faults) {
                    let t = BranchTable::compute(circuit, enc, &faults)?;
                    cache.insert(faults.clone(), t);
                }
                sample_shot(&cache[&faults], setting, noise.p_readout, &mut meas, &mut nrng)
            };
            counts.add(si, shot);
        }
    }
    Ok(counts)
}

/// Parametric bootstrap: every setting's cells are redrawn from a
/// multinomial with the observed frequencies.
pub fn resample<R: Rng + ?Sized>(counts: &Counts, rng: &mut R) -> Counts {
    let mut out = counts.clone();
    let n_settings = 3usize.pow(counts.logical_qubits() as u32);
    for s in 0..n_settings {
        let cells = counts.setting_cells(s);
        let mut left: u64 = cells.iter().sum();
        let mut mass = 1.0;
        let total = left as f64;
        let dst = out.setting_cells_mut(s);
        for (i, &c) in cells.iter().enumerate() {
            let p = c as f64 / total;
            let draw = if left == 0 || p <= 0.0 {
                0
            } else if p >= mass {
                left
            } else {
                Binomial::new(left, (p / mass).min(1.0)).expect("valid probability").sample(rng)
            };
            dst[i] = draw;
            left -= draw;
            mass -= p;
        }
    }
    out
}

fn stderr(samples: &[f64]) -> f64 {
    if samples.len() < 2 {
        return 0.0;
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    (samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
}

struct InputRun {
    rho: DensityMatrix,
    /// One corrected state per bootstrap resample.
    replicas: Vec<DensityMatrix>,
    depth: usize,
}

fn run_input(cfg: &RunConfig, proto: &GateProtocol, labels: &[Label], index: usize) -> Result<InputRun> {
    let circuit = protocol_circuit(proto, labels)?;
    let depth = lower(&circuit).depth();
    let enc = proto.encoding();
    let frame = proto.frame_table();
    match cfg.mode {
        Mode::Exact => {
            if !cfg.noise.is_readout_only() {
                return Err(yjunction_core::Error::Unsupported(
                    "exact mode supports readout noise only; use sampled mode".into(),
                )
                .into());
            }
            let table = BranchTable::compute(&circuit, enc, &[])?;
            let rho = exact_corrected_state(&table, frame, cfg.noise.p_readout)?;
            Ok(InputRun { rho, replicas: vec![], depth })
        }
        Mode::Sampled => {
            let counts = sample_counts(&circuit, enc, &cfg.noise, cfg.shots, cfg.seed, index)?;
            let rho = counts.corrected_state(frame)?;
            let replicas = (0..cfg.bootstrap)
                .map(|b| {
                    let mut rng = stream(cfg.seed, Purpose::Bootstrap, counter(b as u64, index as u64));
                    resample(&counts, &mut rng).corrected_state(frame)
                })
                .collect::<std::result::Result<Vec<_>, _>>()?;
            Ok(InputRun { rho, replicas, depth })
        }
    }
}

pub fn run(cfg: &RunConfig) -> Result<ExperimentResult> {
    cfg.noise.validate()?;
    let proto = cfg.protocol();
    let enc = proto.encoding();
    let k = enc.logical_qubits();
    let full = cfg.inputs.is_none();
    let inputs = cfg.inputs.clone().unwrap_or_else(|| process_inputs(k));
    for l in &inputs {
        enc.basis_state(l)?;
    }
    let runs = inputs.par_iter().enumerate().map(|(i, l)| run_input(cfg, &proto, l, i)).collect::<Result<Vec<_>>>()?;

    let ideal = proto.ideal();
    let codes: Vec<PauliString> =
        (1..1usize << (2 * k)).map(|c| yjunction_core::shots::pauli_from_code(k, c)).collect();
    let mut results = Vec::new();
    for (labels, r) in inputs.iter().zip(&runs) {
        let target = apply_unitary(ideal, &label_vector(labels));
        let fid = r.rho.fidelity_pure(&target);
        let fids: Vec<f64> = r.replicas.iter().map(|x| x.fidelity_pure(&target)).collect();
        let expectations = codes
            .iter()
            .map(|p| {
                let reps: Vec<f64> = r.replicas.iter().map(|x| x.expectation(p)).collect();
                (*p, r.rho.expectation(p), stderr(&reps))
            })
            .collect();
        results.push(InputResult {
            labels: labels.clone(),
            rho: r.rho.clone(),
            fidelity: fid,
            fidelity_stderr: stderr(&fids),
            expectations,
            depth: r.depth,
        });
    }

    let process = if full {
        let d = enc.dim();
        let outs: Vec<DensityMatrix> = runs.iter().map(|r| r.rho.clone()).collect();
        let choi = choi_from_outputs(k, &outs)?;
        let f = process_fidelity(&choi, ideal);
        let mut reps = Vec::new();
        for b in 0..cfg.bootstrap.min(runs.iter().map(|r| r.replicas.len()).min().unwrap_or(0)) {
            let outs: Vec<DensityMatrix> = runs.iter().map(|r| r.replicas[b].clone()).collect();
            reps.push(process_fidelity(&choi_from_outputs(k, &outs)?, ideal));
        }
        Some(ProcessResult {
            choi,
            fidelity: f,
            stderr: stderr(&reps),
            average_gate_fidelity: average_gate_fidelity(f, d),
        })
    } else {
        None
    };
    Ok(ExperimentResult { config: cfg.clone(), encoding: enc.id(), inputs: results, process })
}

/// Short text of an input, for tables.
pub fn input_name(labels: &[Label]) -> String {
    labels_to_string(labels)
}
