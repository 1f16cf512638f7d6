//! Closed-form entanglement spectra, entropy bounds, bond-dimension
//! estimation and scaling diagnostics.

mod estimator;
mod spectra;
mod stats;

pub use estimator::{required_bond_dimension, EstimatorResult, ACCEPTANCE_BAND, TARGET_SLACK};
pub use spectra::{
    cat_site_spectrum, cat_spectra, ere_cat, ere_fock, ere_from_spectra, ere_lower_bound,
    ere_single_photon, ere_upper_bound, fock_site_spectrum, fock_spectra, iqp_ere_bound,
    single_photon_site_spectrum, single_photon_spectra, SiteSpectrum, ThetaProfile,
};
pub use stats::{
    commutation_statistics, memory_estimate, normalized_commutator, r_squared,
    scaling_diagnostic, CommutationSummary, ScalingMode,
};
