use super::{Interferometer, LossyInputSpec};
use crate::error::{MnsError, Result};
use crate::mps::MpsState;
use crate::record::SampleRecord;
use crate::trajectory::{run_grouped, Draw};

/// Samples `shots` photon-number outcomes of a lossy input through
/// `circuit`. `chi = None` leaves bonds untruncated.
pub fn run_lossy_boson_sampling(
    spec: &LossyInputSpec,
    circuit: &Interferometer,
    chi: Option<usize>,
    shots: u64,
    seed: u64,
) -> Result<Vec<SampleRecord>> {
    spec.validate()?;
    if circuit.mode_count() != spec.mode_count {
        return Err(MnsError::Shape(format!(
            "circuit has {} modes, input spec {}",
            circuit.mode_count(),
            spec.mode_count
        )));
    }
    if chi == Some(0) {
        return Err(MnsError::InvalidParameter("chi must be at least 1".into()));
    }
    let gates = circuit.lift(spec.local_dim())?;
    Ok(run_grouped(
        shots,
        seed,
        |rng| {
            let branch = spec.sample_branch(rng)?;
            Ok(Draw {
                key: branch.labels.iter().map(|l| l.key()).collect::<Vec<u64>>(),
                data: spec.register_states(&branch)?,
                labels: branch.labels,
            })
        },
        |states| {
            let mut mps = MpsState::product(states, chi)?;
            mps.apply_gates(&gates)?;
            Ok(mps)
        },
    ))
}
