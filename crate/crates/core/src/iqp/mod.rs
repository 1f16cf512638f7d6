//! Noisy IQP sampling: noise folding, φ± input branches, Pauli frames and
//! the trajectory pipeline.

mod circuit;
mod pipeline;

pub use circuit::{random_iqp_circuit, DiagonalGate, IqpCircuit};
pub use pipeline::{run_noisy_iqp, trajectory_gates};

use std::f64::consts::{FRAC_1_SQRT_2, LN_2};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_half_interval, MnsError, Result};
use crate::linalg::C64;
use crate::photonic::DecompositionBranch;
use crate::record::BranchLabel;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NoiseModel {
    Dephasing,
    Depolarizing,
}

/// Per-qubit, per-layer noise. `extra_noise_layer` adds one more noise
/// layer after the last diagonal layer, before readout.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseSpec {
    pub model: NoiseModel,
    pub rate: f64,
    pub extra_noise_layer: bool,
}

impl NoiseSpec {
    pub fn new(model: NoiseModel, rate: f64) -> Self {
        Self {
            model,
            rate,
            extra_noise_layer: false,
        }
    }

    pub fn noiseless() -> Self {
        Self::new(NoiseModel::Dephasing, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        check_half_interval("p", self.rate)
    }

    /// Number of noise layers for a circuit of the given depth.
    pub fn noise_layers(&self, depth: usize) -> usize {
        depth + usize::from(self.extra_noise_layer)
    }

    /// Rate of the X and Y channels per layer; zero for dephasing.
    pub fn pauli_rate(&self) -> Result<f64> {
        match self.model {
            NoiseModel::Dephasing => Ok(0.0),
            NoiseModel::Depolarizing => depolarizing_to_pauli(self.rate),
        }
    }

    /// Total Z noise folded onto the input for a circuit of `depth` layers.
    pub fn folded_rate(&self, depth: usize) -> Result<f64> {
        self.validate()?;
        let per_layer = match self.model {
            NoiseModel::Dephasing => self.rate,
            NoiseModel::Depolarizing => depolarizing_to_pauli(self.rate)?,
        };
        Ok(compose_dephasing(per_layer, self.noise_layers(depth)))
    }
}

fn compose_dephasing(p: f64, layers: usize) -> f64 {
    (1.0 - (1.0 - 2.0 * p).powi(layers as i32)) / 2.0
}

/// `(1 − (1−2p)^d)/2`.
pub fn fold_dephasing(p: f64, depth: usize) -> Result<f64> {
    check_half_interval("p", p)?;
    if depth == 0 {
        return Err(MnsError::InvalidParameter("depth must be >= 1".into()));
    }
    Ok(compose_dephasing(p, depth))
}

/// `q = (1 − √(1−2p))/2`.
pub fn depolarizing_to_pauli(p: f64) -> Result<f64> {
    check_half_interval("p", p)?;
    Ok((1.0 - (1.0 - 2.0 * p).sqrt()) / 2.0)
}

/// Amplitudes `(q0, q1)` of φ+.
pub fn phi_amplitudes(p_d: f64) -> Result<(f64, f64)> {
    check_half_interval("p_d", p_d)?;
    let (a, b) = ((1.0 - p_d).sqrt(), p_d.sqrt());
    Ok(((a + b) * FRAC_1_SQRT_2, (a - b) * FRAC_1_SQRT_2))
}

/// φ+ = q0|0⟩ + q1|1⟩, φ− = q1|0⟩ + q0|1⟩.
pub fn phi_state(p_d: f64, label: BranchLabel) -> Result<Vec<C64>> {
    let (q0, q1) = phi_amplitudes(p_d)?;
    match label {
        BranchLabel::Plus => Ok(vec![C64::new(q0, 0.0), C64::new(q1, 0.0)]),
        BranchLabel::Minus => Ok(vec![C64::new(q1, 0.0), C64::new(q0, 0.0)]),
        other => Err(MnsError::InvalidParameter(format!("IQP branch label {other:?}"))),
    }
}

pub fn sample_iqp_input_branch(p_d: f64, n: usize, seed: u64) -> Result<DecompositionBranch> {
    iqp_input_branch_with(p_d, n, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn iqp_input_branch_with<R: Rng + ?Sized>(
    p_d: f64,
    n: usize,
    rng: &mut R,
) -> Result<DecompositionBranch> {
    check_half_interval("p_d", p_d)?;
    let labels: Vec<BranchLabel> = (0..n)
        .map(|_| if rng.random::<bool>() { BranchLabel::Plus } else { BranchLabel::Minus })
        .collect();
    let local_pure_states = labels
        .iter()
        .map(|&l| phi_state(p_d, l))
        .collect::<Result<_>>()?;
    Ok(DecompositionBranch {
        local_pure_states,
        labels,
        log_probability: -(n as f64) * LN_2,
    })
}

/// Explicit Pauli gates for one trajectory: an X mask after each noise layer
/// and the merged Z parity applied before readout.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliFrame {
    pub x_masks: Vec<Vec<bool>>,
    pub z_mask: Vec<bool>,
}

impl PauliFrame {
    pub fn identity(n: usize, layers: usize) -> Self {
        Self {
            x_masks: vec![vec![false; n]; layers],
            z_mask: vec![false; n],
        }
    }

    pub fn is_identity(&self) -> bool {
        self.x_masks.iter().flatten().chain(&self.z_mask).all(|b| !b)
    }
}

pub fn sample_pauli_frame(noise: &NoiseSpec, circuit: &IqpCircuit, seed: u64) -> Result<PauliFrame> {
    pauli_frame_with(noise, circuit, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Per layer and qubit, X with probability q and independently Y with
/// probability q. Y is recorded as X plus a Z toggle; phases are dropped.
pub fn pauli_frame_with<R: Rng + ?Sized>(
    noise: &NoiseSpec,
    circuit: &IqpCircuit,
    rng: &mut R,
) -> Result<PauliFrame> {
    noise.validate()?;
    let n = circuit.qubit_count();
    let layers = noise.noise_layers(circuit.depth());
    let mut frame = PauliFrame::identity(n, layers);
    let q = noise.pauli_rate()?;
    if q == 0.0 {
        return Ok(frame);
    }
    for mask in frame.x_masks.iter_mut() {
        for (i, bit) in mask.iter_mut().enumerate() {
            if rng.random::<f64>() < q {
                *bit ^= true;
            }
            if rng.random::<f64>() < q {
                *bit ^= true;
                frame.z_mask[i] ^= true;
            }
        }
    }
    Ok(frame)
}
