//! Lossy boson sampling: input decompositions, circuit families and the
//! trajectory pipeline.

mod circuits;
mod decomposition;
mod pipeline;

pub use circuits::{
    balanced_splitter, brickwall_gatelist, default_brickwall_depth, haar_rows,
    lift_mode_unitary, parity_phase, theta_profile, ustc_half_width, ustc_like_gatelist,
    worst_case_gatelist, Interferometer, ModeGate, MODE_UNITARY_TOL,
};
pub use decomposition::{
    binomial_weights, cat_branch_states, coherent_amplitudes, coherent_tail_mass,
    default_cat_cutoff, fock_branch_state, fock_branch_with, sample_cat_branch,
    sample_fock_branch, sample_single_photon_branch, single_photon_branch_with,
    single_photon_state, DecompositionBranch, Parity, CAT_TAIL_TOL,
};
pub use pipeline::run_lossy_boson_sampling;

use rand::Rng;

use crate::error::{check_positive, check_unit_interval, MnsError, Result};
use crate::linalg::{ComplexMatrix, C64};

/// Kind of photonic input on each occupied mode.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InputKind {
    SinglePhoton,
    Fock { n: usize },
    /// `cutoff = None` picks [`default_cat_cutoff`].
    Cat {
        parity: Parity,
        gamma: f64,
        cutoff: Option<usize>,
    },
}

/// Lossy input on `occupied_modes` of `mode_count` modes.
#[derive(Clone, Debug, PartialEq)]
pub struct LossyInputSpec {
    pub kind: InputKind,
    pub mode_count: usize,
    pub occupied_modes: usize,
    pub eta_total: f64,
    /// Occupied modes; the first N when `None`.
    pub input_modes: Option<Vec<usize>>,
    /// Fock cutoff + 1 per mode; defaults to the largest total photon count
    /// the input can carry plus one.
    pub local_dim: Option<usize>,
}

impl LossyInputSpec {
    pub fn new(kind: InputKind, mode_count: usize, occupied_modes: usize, eta_total: f64) -> Self {
        Self {
            kind,
            mode_count,
            occupied_modes,
            eta_total,
            input_modes: None,
            local_dim: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_unit_interval("eta", self.eta_total)?;
        if self.mode_count == 0 {
            return Err(MnsError::InvalidDimension("zero modes".into()));
        }
        if self.occupied_modes > self.mode_count {
            return Err(MnsError::InvalidParameter(format!(
                "N = {} exceeds M = {}",
                self.occupied_modes, self.mode_count
            )));
        }
        match self.kind {
            InputKind::Fock { n: 0 } => {
                return Err(MnsError::DegenerateInput("Fock input with n = 0".into()))
            }
            InputKind::Cat { gamma, .. } => check_positive("gamma", gamma)?,
            _ => {}
        }
        let modes = self.input_modes();
        if modes.len() != self.occupied_modes {
            return Err(MnsError::InvalidParameter(format!(
                "{} input modes listed for N = {}",
                modes.len(),
                self.occupied_modes
            )));
        }
        let mut seen = vec![false; self.mode_count];
        for &m in &modes {
            if m >= self.mode_count || std::mem::replace(&mut seen[m], true) {
                return Err(MnsError::InvalidParameter(format!(
                    "input mode {m} out of range or repeated"
                )));
            }
        }
        if self.local_dim() < self.min_local_dim() {
            return Err(MnsError::InvalidParameter(format!(
                "local dimension {} cannot hold the input states (need {})",
                self.local_dim(),
                self.min_local_dim()
            )));
        }
        Ok(())
    }

    pub fn input_modes(&self) -> Vec<usize> {
        self.input_modes
            .clone()
            .unwrap_or_else(|| (0..self.occupied_modes).collect())
    }

    pub fn cat_cutoff(&self) -> Option<usize> {
        match self.kind {
            InputKind::Cat { gamma, cutoff, .. } => {
                Some(cutoff.unwrap_or_else(|| default_cat_cutoff(gamma)))
            }
            _ => None,
        }
    }

    fn min_local_dim(&self) -> usize {
        match self.kind {
            InputKind::SinglePhoton => 2,
            InputKind::Fock { n } => n + 1,
            InputKind::Cat { .. } => self.cat_cutoff().unwrap_or(0) + 1,
        }
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim.unwrap_or_else(|| {
            let d = match self.kind {
                InputKind::SinglePhoton => self.occupied_modes + 1,
                InputKind::Fock { n } => n * self.occupied_modes + 1,
                InputKind::Cat { .. } => 0,
            };
            d.max(self.min_local_dim())
        })
    }

    /// Draws one branch for the occupied modes.
    pub fn sample_branch<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<DecompositionBranch> {
        let n = self.occupied_modes;
        match self.kind {
            InputKind::SinglePhoton => single_photon_branch_with(self.eta_total, n, rng),
            InputKind::Fock { n: photons } => fock_branch_with(photons, self.eta_total, n, rng),
            InputKind::Cat { parity, gamma, .. } => {
                let cutoff = self.cat_cutoff().expect("cat input");
                let states = cat_branch_states(gamma, parity, self.eta_total, cutoff)?;
                Ok(decomposition::cat_branch_from(&states, n, rng))
            }
        }
    }

    /// Full-register product input for a branch, vacuum on empty modes.
    pub fn register_states(&self, branch: &DecompositionBranch) -> Result<Vec<Vec<C64>>> {
        let d = self.local_dim();
        let mut vacuum = vec![C64::new(0.0, 0.0); d];
        vacuum[0] = C64::new(1.0, 0.0);
        let mut out = vec![vacuum; self.mode_count];
        for (&m, v) in self.input_modes().iter().zip(&branch.local_pure_states) {
            out[m] = decomposition::pad(v, d)?;
        }
        Ok(out)
    }
}

/// `(1−η)|0⟩⟨0| + η|1⟩⟨1|`.
pub fn lossy_single_photon(eta: f64) -> Result<ComplexMatrix> {
    check_unit_interval("eta", eta)?;
    ComplexMatrix::from_real(2, 2, &[1.0 - eta, 0.0, 0.0, eta])
}

/// Total transmission of `depth` uniform loss layers.
pub fn fold_loss(eta_per_layer: f64, depth: usize) -> Result<f64> {
    check_unit_interval("eta", eta_per_layer)?;
    if depth == 0 {
        return Err(MnsError::InvalidParameter("depth must be >= 1".into()));
    }
    Ok(eta_per_layer.powi(depth as i32))
}
