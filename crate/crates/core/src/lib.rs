//! Lossy boson sampling and noisy IQP sampling by pure-state decomposition
//! and matrix-product-state trajectories, with closed-form entanglement
//! analysis and bond-dimension estimation.

pub mod analysis;
pub mod error;
pub mod iqp;
pub mod linalg;
pub mod mps;
pub mod oracle;
pub mod photonic;
pub mod record;
mod trajectory;

pub use error::{MnsError, Result};
pub use linalg::{ComplexMatrix, C64};
pub use mps::{Gate, GateList, MpsState};
pub use record::{BranchLabel, SampleRecord};
