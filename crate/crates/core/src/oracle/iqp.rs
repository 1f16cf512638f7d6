use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use super::dense::{DenseState, DensityMatrix};
use super::ProbabilityTable;
use crate::error::{check_half_interval, MnsError, Result};
use crate::iqp::{phi_state, trajectory_gates, IqpCircuit, NoiseModel, NoiseSpec, PauliFrame};
use crate::linalg::{ComplexMatrix, C64, ZERO};
use crate::mps::Gate;
use crate::record::BranchLabel;

pub const IQP_ORACLE_MAX_QUBITS: usize = 12;
/// Frame enumeration visits 4^(n·layers) Pauli patterns.
const FRAME_ENUM_MAX_SLOTS: usize = 8;

#[derive(Clone, Copy)]
enum Pauli {
    X,
    Y,
    Z,
}

fn check_size(n: usize) -> Result<()> {
    if n > IQP_ORACLE_MAX_QUBITS {
        return Err(MnsError::ResourceLimit(format!(
            "{n} qubits exceed the {IQP_ORACLE_MAX_QUBITS}-qubit density-matrix oracle"
        )));
    }
    Ok(())
}

fn local(v: [f64; 4]) -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &v).expect("2x2")
}

/// `PρP` for a Pauli on the qubit with bit mask `e`.
fn conjugate(rho: &DensityMatrix, e: usize, p: Pauli) -> Vec<C64> {
    let d = rho.dim();
    let i = C64::new(0.0, 1.0);
    // P_{a, a⊕e} for X and Y, P_{a,a} for Z
    let off = |a: usize| -> C64 {
        match (p, a & e == 0) {
            (Pauli::X, _) => C64::new(1.0, 0.0),
            (Pauli::Y, true) => -i,
            (Pauli::Y, false) => i,
            (Pauli::Z, true) => C64::new(1.0, 0.0),
            (Pauli::Z, false) => C64::new(-1.0, 0.0),
        }
    };
    let flip = if matches!(p, Pauli::Z) { 0 } else { e };
    let mut out = vec![ZERO; d * d];
    for a in 0..d {
        for b in 0..d {
            out[a * d + b] = off(a) * rho.entry(a ^ flip, b ^ flip) * off(b).conj();
        }
    }
    out
}

fn apply_noise(rho: &mut DensityMatrix, n: usize, noise: &NoiseSpec) {
    let p = noise.rate;
    if p == 0.0 {
        return;
    }
    for q in 0..n {
        let e = 1 << (n - 1 - q);
        match noise.model {
            NoiseModel::Dephasing => {
                let z = conjugate(rho, e, Pauli::Z);
                rho.data_mut()
                    .iter_mut()
                    .zip(z)
                    .for_each(|(r, zr)| *r = (1.0 - p) * *r + p * zr);
            }
            NoiseModel::Depolarizing => {
                let x = conjugate(rho, e, Pauli::X);
                let y = conjugate(rho, e, Pauli::Y);
                let z = conjugate(rho, e, Pauli::Z);
                for (k, r) in rho.data_mut().iter_mut().enumerate() {
                    *r = (1.0 - 1.5 * p) * *r + 0.5 * p * (x[k] + y[k] + z[k]);
                }
            }
        }
    }
}

fn apply_layer(rho: &mut DensityMatrix, circuit: &IqpCircuit, t: usize) {
    let n = circuit.qubit_count();
    let layer = &circuit.layers()[t];
    if layer.is_empty() {
        return;
    }
    let phases: Vec<C64> = (0..rho.dim())
        .map(|x| layer.iter().map(|g| g.phase_on(x, n)).product())
        .collect();
    rho.map_entries(|a, b, z| phases[a] * z * phases[b].conj());
}

fn apply_hadamards(rho: &mut DensityMatrix, n: usize) -> Result<()> {
    let h = FRAC_1_SQRT_2;
    for site in 0..n {
        rho.apply_gate(&Gate::Single { site, matrix: local([h, h, h, -h]) })?;
    }
    Ok(())
}

/// Exact density matrix of the noisy circuit: |+⟩^n input, each diagonal
/// layer followed by a noise layer (plus the optional extra one), and the
/// Hadamard readout layer when `hadamards` is set.
pub fn noisy_iqp_density(circuit: &IqpCircuit, noise: &NoiseSpec, hadamards: bool) -> Result<DensityMatrix> {
    noise.validate()?;
    let n = circuit.qubit_count();
    check_size(n)?;
    let plus = local([0.5, 0.5, 0.5, 0.5]);
    let mut rho = DensityMatrix::product(&vec![plus; n])?;
    for t in 0..noise.noise_layers(circuit.depth()) {
        if t < circuit.depth() {
            apply_layer(&mut rho, circuit, t);
        }
        apply_noise(&mut rho, n, noise);
    }
    if hadamards {
        apply_hadamards(&mut rho, n)?;
    }
    Ok(rho)
}

/// Noiseless diagonal layers on the input `(1−p_d)|+⟩⟨+| + p_d|−⟩⟨−|` per
/// qubit, without the readout layer.
pub fn front_loaded_dephasing_density(circuit: &IqpCircuit, p_d: f64) -> Result<DensityMatrix> {
    check_half_interval("p_d", p_d)?;
    let n = circuit.qubit_count();
    check_size(n)?;
    let c = 0.5 - p_d;
    let mut rho = DensityMatrix::product(&vec![local([0.5, c, c, 0.5]); n])?;
    for t in 0..circuit.depth() {
        apply_layer(&mut rho, circuit, t);
    }
    Ok(rho)
}

/// Output distribution of the noisy circuit, by density-matrix evolution.
pub fn exact_noisy_iqp_distribution(circuit: &IqpCircuit, noise: &NoiseSpec) -> Result<ProbabilityTable> {
    let rho = noisy_iqp_density(circuit, noise, true)?;
    Ok(ProbabilityTable::from_dense(rho.dims(), &rho.diagonal()))
}

/// Output density matrix averaged exactly over every φ± input branch and
/// every Pauli pattern of the X and Y channels. Small instances only.
pub fn frame_enumeration_distribution(circuit: &IqpCircuit, noise: &NoiseSpec) -> Result<(ComplexMatrix, ProbabilityTable)> {
    noise.validate()?;
    let n = circuit.qubit_count();
    let layers = noise.noise_layers(circuit.depth());
    if n * layers > FRAME_ENUM_MAX_SLOTS {
        return Err(MnsError::ResourceLimit(format!(
            "frame enumeration over {n} qubits and {layers} layers"
        )));
    }
    let p_d = noise.folded_rate(circuit.depth())?;
    let q = noise.pauli_rate()?;
    // Each (layer, qubit) slot: nothing, X only, Y only, or X and Y (= Z up to phase).
    let weights = [(1.0 - q) * (1.0 - q), q * (1.0 - q), q * (1.0 - q), q * q];
    let slots = n * layers;
    let mut frames: BTreeMap<PauliFrame, f64> = BTreeMap::new();
    for code in 0..(1usize << (2 * slots)) {
        let mut frame = PauliFrame::identity(n, layers);
        let mut w = 1.0;
        for s in 0..slots {
            let c = (code >> (2 * s)) & 3;
            w *= weights[c];
            let (t, i) = (s / n, s % n);
            frame.x_masks[t][i] ^= c == 1 || c == 2;
            frame.z_mask[i] ^= c == 2 || c == 3;
        }
        if w > 0.0 {
            *frames.entry(frame).or_insert(0.0) += w;
        }
    }
    let dim = 1usize << n;
    let mut avg = ComplexMatrix::zeros(dim, dim);
    let branch_weight = 0.5f64.powi(n as i32);
    for bits in 0..dim {
        let inputs = (0..n)
            .map(|i| {
                let label = if (bits >> i) & 1 == 1 { BranchLabel::Minus } else { BranchLabel::Plus };
                phi_state(p_d, label)
            })
            .collect::<Result<Vec<_>>>()?;
        for (frame, &w) in &frames {
            let mut psi = DenseState::product(&inputs)?;
            for g in trajectory_gates(circuit, frame)? {
                psi.apply_gate(&g)?;
            }
            let amps = psi.amplitudes();
            let scale = w * branch_weight;
            for a in 0..dim {
                for b in 0..dim {
                    avg[(a, b)] += scale * amps[a] * amps[b].conj();
                }
            }
        }
    }
    let diag: Vec<f64> = (0..dim).map(|i| avg[(i, i)].re).collect();
    Ok((avg, ProbabilityTable::from_dense(&vec![2; n], &diag)))
}
