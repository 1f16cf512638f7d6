use std::ffi::c_char;
use std::fs::File;
use std::io::BufWriter;

use mns::iqp::{run_noisy_iqp, IqpCircuit, NoiseModel, NoiseSpec};
use mns::photonic::{
    brickwall_gatelist, run_lossy_boson_sampling, ustc_like_gatelist, worst_case_gatelist, InputKind,
    LossyInputSpec, Parity,
};
use mns::record::write_jsonl;
use mns::SampleRecord;

use crate::status::{guard, Failure, MnsStatus};
use crate::util::string;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MnsInputKind {
    SinglePhoton = 0,
    Fock = 1,
    EvenCat = 2,
    OddCat = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MnsCircuitKind {
    Brickwall = 0,
    WorstCase = 1,
    Ustc = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MnsNoiseModel {
    Dephasing = 0,
    Depolarizing = 1,
}

/// Lossy boson-sampling run. Zero `modes` means 2·photons (ignored for
/// `Ustc`), zero `depth` means 4·modes, zero `max_chi` means unbounded.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MnsBsConfig {
    pub input: MnsInputKind,
    pub circuit: MnsCircuitKind,
    pub modes: usize,
    pub photons: usize,
    pub eta: f64,
    pub fock_n: usize,
    pub gamma: f64,
    pub depth: usize,
    pub circuit_seed: u64,
    pub max_chi: usize,
    pub shots: u64,
    pub seed: u64,
}

fn save(records: &[SampleRecord], path: &str) -> Result<(), Failure> {
    let file = File::create(path).map_err(|e| Failure::new(MnsStatus::Io, format!("{path}: {e}")))?;
    Ok(write_jsonl(records, &mut BufWriter::new(file))?)
}

fn bs_records(c: &MnsBsConfig) -> Result<Vec<SampleRecord>, Failure> {
    let kind = match c.input {
        MnsInputKind::SinglePhoton => InputKind::SinglePhoton,
        MnsInputKind::Fock => InputKind::Fock { n: c.fock_n },
        MnsInputKind::EvenCat => InputKind::Cat { parity: Parity::Even, gamma: c.gamma, cutoff: None },
        MnsInputKind::OddCat => InputKind::Cat { parity: Parity::Odd, gamma: c.gamma, cutoff: None },
    };
    let m = if c.modes == 0 { 2 * c.photons } else { c.modes };
    let (circuit, inputs) = match c.circuit {
        MnsCircuitKind::Brickwall => {
            let depth = if c.depth == 0 { 4 * m } else { c.depth };
            (brickwall_gatelist(m, depth, c.circuit_seed)?, None)
        }
        MnsCircuitKind::WorstCase => (worst_case_gatelist(m, c.photons)?, None),
        MnsCircuitKind::Ustc => {
            let (circuit, inputs) = ustc_like_gatelist(c.photons, c.circuit_seed)?;
            (circuit, Some(inputs))
        }
    };
    let mut spec = LossyInputSpec::new(kind, circuit.mode_count(), c.photons, c.eta);
    spec.input_modes = inputs;
    let chi = (c.max_chi > 0).then_some(c.max_chi);
    Ok(run_lossy_boson_sampling(&spec, &circuit, chi, c.shots, c.seed)?)
}

/// Runs the photonic pipeline and writes one JSON record per shot to `path`.
///
/// # Safety
/// `config` must point to a valid config and `path` to a nul-terminated
/// string.
#[no_mangle]
pub unsafe extern "C" fn mns_bs_sample_jsonl(config: *const MnsBsConfig, path: *const c_char) -> MnsStatus {
    guard(|| {
        let c = config.as_ref().ok_or_else(|| Failure::null("config"))?;
        let path = string(path, "path")?;
        save(&bs_records(c)?, path)
    })
}

/// Runs the noisy IQP pipeline on a circuit in text form (one layer per
/// line) and writes JSONL to `path`. `qubits = 0` infers the register.
///
/// # Safety
/// `circuit_text` and `path` must be nul-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn mns_iqp_sample_jsonl(
    circuit_text: *const c_char,
    qubits: usize,
    noise: MnsNoiseModel,
    rate: f64,
    extra_noise_layer: bool,
    max_chi: usize,
    shots: u64,
    seed: u64,
    path: *const c_char,
) -> MnsStatus {
    guard(|| {
        let text = string(circuit_text, "circuit_text")?;
        let path = string(path, "path")?;
        let circuit = IqpCircuit::parse(text, (qubits > 0).then_some(qubits))?;
        let model = match noise {
            MnsNoiseModel::Dephasing => NoiseModel::Dephasing,
            MnsNoiseModel::Depolarizing => NoiseModel::Depolarizing,
        };
        let spec = NoiseSpec { model, rate, extra_noise_layer };
        let chi = (max_chi > 0).then_some(max_chi);
        save(&run_noisy_iqp(&circuit, &spec, chi, shots, seed)?, path)
    })
}
