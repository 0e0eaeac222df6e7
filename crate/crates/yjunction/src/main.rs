use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use yjunction::config::load_noise;
use yjunction::core::circuit::protocol_circuit;
use yjunction::core::encoding::{labels_to_string, parse_labels, EncodingId, Label};
use yjunction::core::noise::NoiseModel;
use yjunction::core::pauli::PauliString;
use yjunction::core::protocol::GateId;
use yjunction::core::tomography::process_inputs;
use yjunction::experiment::{self, Mode, RunConfig};
use yjunction::fixture::{calibrate, compare_with_reference, Fixture};
use yjunction::report::{self, Format};
use yjunction::verify::{run_suite, tally};
use yjunction::{qasm, Error};

#[derive(Parser)]
#[command(name = "yjunction", version, about = "Geometric gates on Y-junction Majorana encodings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run built-in checks.
    Verify {
        /// algebra, encodings, appendixB, frames, circuits or all.
        #[arg(default_value = "all")]
        suite: String,
        /// Also compare the frame tables of a calibration fixture.
        #[arg(long)]
        fixture: Option<PathBuf>,
        /// Treat known deviations as failures.
        #[arg(long)]
        strict: bool,
    },
    /// Logical state and process tomography of a gate.
    Experiment {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 32768)]
        shots: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Infinite-shot limit instead of sampling.
        #[arg(long)]
        exact: bool,
        /// Noise config file, or `none` / `default`.
        #[arg(long, default_value = "none")]
        noise: String,
        #[arg(long, default_value_t = 50)]
        bootstrap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutFormat::Txt)]
        format: OutFormat,
    },
    /// Write the circuit of a gate as OpenQASM 3.
    Export {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum, default_value_t = ExportFormat::Qasm3)]
        format: ExportFormat,
        /// Rewrite into the {cz, id, rx, rz, sx, x} basis.
        #[arg(long)]
        lower: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// QASM checks.
    Check {
        /// Parse, emit and parse again; the two circuits must agree.
        #[arg(long)]
        roundtrip: bool,
        /// Files to check; without files every built-in circuit is used.
        files: Vec<PathBuf>,
    },
    /// Write the calibration fixture.
    Calibrate {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Derive a gate's frame table and compare it with the reference table.
    DeriveFrames {
        #[arg(long)]
        gate: GateId,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Target {
    /// I, S, Sdg, T, Tdg, RxxP or RxxM.
    #[arg(long)]
    gate: GateId,
    /// Encoding for the identity gate (y1 or y2).
    #[arg(long)]
    encoding: Option<EncodingId>,
    /// Input labels, e.g. `+` or `0,i+`; repeat for several inputs.
    #[arg(long = "labels", value_parser = labels_arg)]
    labels: Vec<Vec<Label>>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Txt,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Qasm3,
}

fn labels_arg(s: &str) -> Result<Vec<Label>, String> {
    parse_labels(s).map_err(|e| e.to_string())
}

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) | Error::Csv(_) => EXIT_IO,
        Error::Qasm { .. } | Error::Format { .. } => EXIT_USAGE,
        Error::Core(yjunction::core::Error::Unsupported(_)) => EXIT_USAGE,
        Error::Core(_) => EXIT_FAIL,
    }
}

fn output(path: &Option<PathBuf>, text: &[u8]) -> Result<(), Error> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().write_all(text)?,
    }
    Ok(())
}

fn target_config(t: &Target) -> RunConfig {
    let mut cfg = RunConfig::new(t.gate);
    cfg.encoding = t.encoding;
    if !t.labels.is_empty() {
        cfg.inputs = Some(t.labels.clone());
    }
    cfg
}

fn noise_arg(s: &str) -> Result<NoiseModel, Error> {
    match s {
        "none" => Ok(NoiseModel::NONE),
        "default" => Ok(NoiseModel::default()),
        path => load_noise(Path::new(path)),
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Verify { suite, fixture, strict } => {
            let fx = match fixture {
                Some(p) => Some(Fixture::parse(&fs::read_to_string(p)?)?),
                None => None,
            };
            let checks = run_suite(&suite, fx.as_ref())?;
            for c in &checks {
                println!("{c}");
            }
            let (p, f, k) = tally(&checks);
            println!("{p} passed, {f} failed, {k} known deviations");
            Ok(if f > 0 || (strict && k > 0) { EXIT_FAIL } else { 0 })
        }
        Command::Experiment { target, shots, seed, exact, noise, bootstrap, out, format } => {
            let mut cfg = target_config(&target);
            cfg.shots = shots;
            cfg.seed = seed;
            cfg.mode = if exact { Mode::Exact } else { Mode::Sampled };
            cfg.noise = noise_arg(&noise)?;
            cfg.bootstrap = bootstrap;
            let r = experiment::run(&cfg)?;
            let fmt = match format {
                OutFormat::Csv => Format::Csv,
                OutFormat::Txt => Format::Txt,
            };
            let mut buf = Vec::new();
            report::write(&r, fmt, &mut buf)?;
            output(&out, &buf)?;
            Ok(0)
        }
        Command::Export { target, format: ExportFormat::Qasm3, lower, out } => {
            let cfg = target_config(&target);
            let proto = cfg.protocol();
            let inputs = cfg.inputs.unwrap_or_else(|| process_inputs(proto.encoding().logical_qubits())[..1].to_vec());
            let mut text = String::new();
            for labels in inputs {
                let mut c = protocol_circuit(&proto, &labels)?;
                if lower {
                    c = qasm::lower(&c);
                }
                if !text.is_empty() {
                    text.push('\n');
                }
                text.push_str(&format!("// {} on {}\n", proto.name(), labels_to_string(&labels)));
                text.push_str(&qasm::emit(&c));
            }
            output(&out, text.as_bytes())?;
            Ok(0)
        }
        Command::Check { roundtrip: _, files } => {
            let mut failures = 0;
            if files.is_empty() {
                for g in GateId::ALL {
                    for labels in process_inputs(g.encoding().logical_qubits()) {
                        let c = yjunction::core::circuit::gate_circuit(g, &labels)?;
                        for (kind, c) in [("native", c.clone()), ("lowered", qasm::lower(&c))] {
                            let ok = qasm::parse(&qasm::emit(&c))? == c;
                            if !ok {
                                failures += 1;
                                println!("FAIL {g} {} {kind}", labels_to_string(&labels));
                            }
                        }
                    }
                }
                println!("round trip of built-in circuits: {failures} failures");
            } else {
                for f in files {
                    let a = qasm::parse(&fs::read_to_string(&f)?)?;
                    let b = qasm::parse(&qasm::emit(&a))?;
                    let ok = a == b;
                    println!("{} {}", if ok { "PASS" } else { "FAIL" }, f.display());
                    failures += usize::from(!ok);
                }
            }
            Ok(if failures > 0 { EXIT_FAIL } else { 0 })
        }
        Command::Calibrate { out } => {
            output(&out, calibrate()?.to_text().as_bytes())?;
            Ok(0)
        }
        Command::DeriveFrames { gate, out } => {
            let p = yjunction::core::protocol::GateProtocol::new(gate);
            let closed = p.derive_frame_table().is_ok();
            let refs = compare_with_reference(gate, p.frame_table());
            let mut text = format!("frames {gate}  closed {}\n", if closed { "yes" } else { "no" });
            text.push_str("outcome  correction  alignment  provenance\n");
            let mut mismatches = 0;
            for ((o, c), &q) in p.frame_table().rows().zip(p.frame_quality()) {
                let prov = match refs.as_ref().and_then(|r| r.iter().find(|x| x.outcome == o)) {
                    Some(r) if r.matches() => "derived, matches reference".to_string(),
                    Some(r) => {
                        let reference: PauliString = format!("+{}", r.reference).parse()?;
                        let a = p.frame_alignment(o, &reference)?;
                        if !closed && a > q - 1e-9 {
                            format!("derived, reference {} ties at {a:.6}", r.reference)
                        } else {
                            mismatches += 1;
                            format!("derived, reference {} at {a:.6}", r.reference)
                        }
                    }
                    None => "derived".to_string(),
                };
                text.push_str(&format!("{o:<8} {:<11} {q:<10.6} {prov}\n", c.letters_string()));
            }
            output(&out, text.as_bytes())?;
            Ok(if mismatches > 0 { EXIT_FAIL } else { 0 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
