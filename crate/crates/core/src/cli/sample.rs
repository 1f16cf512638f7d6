use std::path::PathBuf;

use clap::{Args, ValueEnum};
use mns::iqp::{random_iqp_circuit, run_noisy_iqp, IqpCircuit, NoiseSpec};
use mns::oracle::{exact_lossy_bs_distribution, exact_noisy_iqp_distribution, total_variation_distance, ProbabilityTable};
use mns::photonic::{
    brickwall_gatelist, run_lossy_boson_sampling, ustc_like_gatelist, worst_case_gatelist, InputKind, Interferometer,
    LossyInputSpec,
};
use mns::record::write_jsonl;
use mns::SampleRecord;

use super::error::{CliError, CliResult};
use super::{Emit, NoiseArg, ParityArg};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum InputArg {
    SinglePhoton,
    Fock,
    Cat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CircuitArg {
    Brickwall,
    WorstCase,
    Ustc,
}

#[derive(Debug, Clone, Args)]
pub struct BsArgs {
    #[arg(long, value_enum, env = "MNS_INPUT", default_value_t = InputArg::SinglePhoton)]
    pub input: InputArg,
    /// Mode count M; 2N when unset. Fixed by the circuit for `ustc`.
    #[arg(long, env = "MNS_MODES")]
    pub modes: Option<usize>,
    /// Occupied input modes N.
    #[arg(long, env = "MNS_PHOTONS", default_value_t = 2)]
    pub photons: usize,
    /// Overall transmission.
    #[arg(long, env = "MNS_ETA", default_value_t = 1.0)]
    pub eta: f64,
    /// Photons per occupied mode for Fock input.
    #[arg(long, env = "MNS_FOCK_N", default_value_t = 1)]
    pub fock_n: usize,
    #[arg(long, env = "MNS_GAMMA", default_value_t = 1.0)]
    pub gamma: f64,
    #[arg(long, value_enum, env = "MNS_PARITY", default_value_t = ParityArg::Odd)]
    pub parity: ParityArg,
    /// Fock cutoff of the cat input.
    #[arg(long, env = "MNS_CUTOFF")]
    pub cutoff: Option<usize>,
    #[arg(long, env = "MNS_LOCAL_DIM")]
    pub local_dim: Option<usize>,
    #[arg(long, value_enum, env = "MNS_CIRCUIT", default_value_t = CircuitArg::Brickwall)]
    pub circuit: CircuitArg,
    /// Brick-wall depth; 4M when unset.
    #[arg(long, env = "MNS_DEPTH")]
    pub depth: Option<usize>,
    /// Seed of the random circuit; `--seed` when unset.
    #[arg(long, env = "MNS_CIRCUIT_SEED")]
    pub circuit_seed: Option<u64>,
    /// Bond-dimension cap; unbounded when unset.
    #[arg(long, env = "MNS_CHI")]
    pub chi: Option<usize>,
    #[arg(long, env = "MNS_SHOTS", default_value_t = 1000)]
    pub shots: u64,
}

#[derive(Debug, Clone, Args)]
pub struct IqpArgs {
    /// Qubit count; inferred from the circuit file when unset.
    #[arg(long, env = "MNS_QUBITS")]
    pub qubits: Option<usize>,
    /// Depth of the random circuit.
    #[arg(long, env = "MNS_DEPTH", default_value_t = 4)]
    pub depth: usize,
    #[arg(long, env = "MNS_CZ_DENSITY", default_value_t = 0.5)]
    pub cz_density: f64,
    /// Circuit text file, one layer per line.
    #[arg(long, env = "MNS_CIRCUIT_FILE")]
    pub circuit_file: Option<PathBuf>,
    #[arg(long, env = "MNS_CIRCUIT_SEED")]
    pub circuit_seed: Option<u64>,
    #[arg(long, value_enum, env = "MNS_NOISE", default_value_t = NoiseArg::Dephasing)]
    pub noise: NoiseArg,
    /// Per-layer channel rate p.
    #[arg(long, env = "MNS_RATE", default_value_t = 0.0)]
    pub rate: f64,
    /// One more noise layer after the last diagonal layer.
    #[arg(long, env = "MNS_EXTRA_NOISE_LAYER")]
    pub extra_noise_layer: bool,
    #[arg(long, env = "MNS_CHI")]
    pub chi: Option<usize>,
    #[arg(long, env = "MNS_SHOTS", default_value_t = 1000)]
    pub shots: u64,
}

fn photonic_setup(a: &BsArgs, seed: u64) -> CliResult<(LossyInputSpec, Interferometer)> {
    let kind = match a.input {
        InputArg::SinglePhoton => InputKind::SinglePhoton,
        InputArg::Fock => InputKind::Fock { n: a.fock_n },
        InputArg::Cat => InputKind::Cat { parity: a.parity.into(), gamma: a.gamma, cutoff: a.cutoff },
    };
    let circuit_seed = a.circuit_seed.unwrap_or(seed);
    let (circuit, inputs) = match a.circuit {
        CircuitArg::Ustc => {
            let (c, inputs) = ustc_like_gatelist(a.photons, circuit_seed)?;
            if a.modes.is_some_and(|m| m != c.mode_count()) {
                return Err(CliError::Invalid(format!(
                    "the USTC-like circuit for N = {} has {} modes",
                    a.photons,
                    c.mode_count()
                )));
            }
            (c, Some(inputs))
        }
        CircuitArg::Brickwall => {
            let m = a.modes.unwrap_or(2 * a.photons);
            (brickwall_gatelist(m, a.depth.unwrap_or(4 * m), circuit_seed)?, None)
        }
        CircuitArg::WorstCase => {
            let m = a.modes.unwrap_or(2 * a.photons);
            (worst_case_gatelist(m, a.photons)?, None)
        }
    };
    let mut spec = LossyInputSpec::new(kind, circuit.mode_count(), a.photons, a.eta);
    spec.input_modes = inputs;
    spec.local_dim = a.local_dim;
    spec.validate()?;
    if a.chi == Some(0) {
        return Err(CliError::Invalid("--chi must be at least 1".into()));
    }
    Ok((spec, circuit))
}

fn iqp_setup(a: &IqpArgs, seed: u64) -> CliResult<(IqpCircuit, NoiseSpec)> {
    let noise = NoiseSpec { model: a.noise.into(), rate: a.rate, extra_noise_layer: a.extra_noise_layer };
    noise.validate()?;
    let circuit = match &a.circuit_file {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::CircuitFile(format!("{}: {e}", path.display())))?;
            IqpCircuit::parse(&text, a.qubits).map_err(|e| match e {
                mns::MnsError::Parse { .. } => CliError::CircuitFile(format!("{}: {e}", path.display())),
                other => other.into(),
            })?
        }
        None => {
            let n = a
                .qubits
                .ok_or_else(|| CliError::Invalid("--qubits is required without --circuit-file".into()))?;
            random_iqp_circuit(n, a.depth, a.cz_density, a.circuit_seed.unwrap_or(seed))?
        }
    };
    if a.chi == Some(0) {
        return Err(CliError::Invalid("--chi must be at least 1".into()));
    }
    Ok((circuit, noise))
}

fn jsonl(records: &[SampleRecord]) -> CliResult<Emit> {
    let mut emit = Emit::new();
    write_jsonl(records, &mut emit.body)?;
    Ok(emit)
}

pub fn bs_sample(a: &BsArgs, seed: u64) -> CliResult<Emit> {
    let (spec, circuit) = photonic_setup(a, seed)?;
    jsonl(&run_lossy_boson_sampling(&spec, &circuit, a.chi, a.shots, seed)?)
}

pub fn iqp_sample(a: &IqpArgs, seed: u64) -> CliResult<Emit> {
    let (circuit, noise) = iqp_setup(a, seed)?;
    jsonl(&run_noisy_iqp(&circuit, &noise, a.chi, a.shots, seed)?)
}

fn comparison(pipeline: &str, exact: &ProbabilityTable, records: &[SampleRecord]) -> CliResult<Emit> {
    let empirical = ProbabilityTable::empirical_over(exact, records)?;
    let tvd = total_variation_distance(&empirical, exact)?;
    let ok = records.iter().filter(|r| r.is_ok()).count();
    let discarded = records.iter().map(|r| r.discarded_weight).fold(0.0, f64::max);
    let mut emit = Emit::new();
    emit.body = format!(
        "pipeline,shots,successful,max_discarded_weight,tvd\n{pipeline},{},{ok},{discarded},{tvd}\n",
        records.len()
    )
    .into_bytes();
    Ok(emit)
}

pub fn bs_compare(a: &BsArgs, seed: u64) -> CliResult<Emit> {
    let (spec, circuit) = photonic_setup(a, seed)?;
    let exact = exact_lossy_bs_distribution(&spec, &circuit)?;
    comparison("bs", &exact, &run_lossy_boson_sampling(&spec, &circuit, a.chi, a.shots, seed)?)
}

pub fn iqp_compare(a: &IqpArgs, seed: u64) -> CliResult<Emit> {
    let (circuit, noise) = iqp_setup(a, seed)?;
    let exact = exact_noisy_iqp_distribution(&circuit, &noise)?;
    comparison("iqp", &exact, &run_noisy_iqp(&circuit, &noise, a.chi, a.shots, seed)?)
}
