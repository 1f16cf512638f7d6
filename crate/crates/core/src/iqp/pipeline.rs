use std::f64::consts::FRAC_1_SQRT_2;

use super::{iqp_input_branch_with, pauli_frame_with, phi_state, IqpCircuit, NoiseSpec, PauliFrame};
use crate::error::{MnsError, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::mps::{Gate, MpsState};
use crate::record::{BranchLabel, SampleRecord};
use crate::trajectory::{run_grouped, Draw};

fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).expect("2x2")
}

fn hadamard() -> ComplexMatrix {
    let h = FRAC_1_SQRT_2;
    ComplexMatrix::from_real(2, 2, &[h, h, h, -h]).expect("2x2")
}

/// Gates of one trajectory after the input: each diagonal layer followed by
/// its X mask, any extra noise layer's X mask, the Z parity and the
/// Hadamard readout layer.
pub fn trajectory_gates(circuit: &IqpCircuit, frame: &PauliFrame) -> Result<Vec<Gate>> {
    let n = circuit.qubit_count();
    if frame.z_mask.len() != n || frame.x_masks.iter().any(|m| m.len() != n) {
        return Err(MnsError::Shape(format!("Pauli frame does not match {n} qubits")));
    }
    if frame.x_masks.len() < circuit.depth() {
        return Err(MnsError::Shape(format!(
            "{} X masks for depth {}",
            frame.x_masks.len(),
            circuit.depth()
        )));
    }
    let x = pauli_x();
    let flips = |mask: &[bool]| -> Vec<Gate> {
        mask.iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(site, _)| Gate::Single { site, matrix: x.clone() })
            .collect()
    };
    let mut gates = Vec::new();
    for (t, mask) in frame.x_masks.iter().enumerate() {
        if let Some(layer) = circuit.layers().get(t) {
            gates.extend(layer.iter().map(|g| g.to_gate()));
        }
        gates.extend(flips(mask));
    }
    let z = [C64::new(1.0, 0.0), C64::new(-1.0, 0.0)];
    gates.extend(frame.z_mask.iter().enumerate().filter(|(_, &b)| b).map(|(q, _)| {
        Gate::Diagonal {
            sites: vec![q],
            phases: z.to_vec(),
        }
    }));
    let h = hadamard();
    gates.extend((0..n).map(|site| Gate::Single { site, matrix: h.clone() }));
    Ok(gates)
}

/// Samples `shots` X-basis outcomes of `circuit` under `noise`.
/// `chi = None` leaves bonds untruncated.
pub fn run_noisy_iqp(
    circuit: &IqpCircuit,
    noise: &NoiseSpec,
    chi: Option<usize>,
    shots: u64,
    seed: u64,
) -> Result<Vec<SampleRecord>> {
    noise.validate()?;
    if chi == Some(0) {
        return Err(MnsError::InvalidParameter("chi must be at least 1".into()));
    }
    let n = circuit.qubit_count();
    let p_d = noise.folded_rate(circuit.depth())?;
    Ok(run_grouped(
        shots,
        seed,
        |rng| {
            let branch = iqp_input_branch_with(p_d, n, rng)?;
            let frame = pauli_frame_with(noise, circuit, rng)?;
            let bits: Vec<bool> = branch.labels.iter().map(|l| *l == BranchLabel::Minus).collect();
            Ok(Draw {
                key: (bits, frame.clone()),
                data: (branch.labels.clone(), frame),
                labels: branch.labels,
            })
        },
        |(labels, frame)| {
            let inputs = labels
                .iter()
                .map(|&l| phi_state(p_d, l))
                .collect::<Result<Vec<_>>>()?;
            let mut mps = MpsState::product(&inputs, chi)?;
            for g in trajectory_gates(circuit, frame)? {
                mps.apply_gate(&g)?;
            }
            Ok(mps)
        },
    ))
}
