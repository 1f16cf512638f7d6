use mns::analysis::{
    ere_single_photon, iqp_ere_bound, memory_estimate, required_bond_dimension, SiteSpectrum, ThetaProfile,
};
use mns::linalg::{haar_unitary, permanent};
use mns::MnsError;

use crate::status::{guard, Failure, MnsStatus};
use crate::util::{slice, slice_mut, square_matrix, write};

/// Bond-dimension estimate. After `MNS_STATUS_CAP_EXCEEDED` only
/// `chi_required` is set, to a lower bound on the true value.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MnsBondEstimate {
    pub chi_required: u64,
    pub retained_weight: f64,
    pub threshold_log: f64,
    pub memory_bytes: f64,
    pub pruned_branches: u64,
}

/// `8 χ² M d` bytes.
#[no_mangle]
pub extern "C" fn mns_memory_estimate(chi: u64, modes: usize, local_dim: usize) -> f64 {
    memory_estimate(chi, modes, local_dim)
}

/// Summed per-mode Rényi-α entropy of lossy single photons. `thetas` holds
/// `n` mixing angles, or is null for the worst case θ = π/4.
///
/// # Safety
/// `thetas` must be null or hold `n` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mns_ere_single_photon(
    n: usize,
    eta: f64,
    alpha: f64,
    thetas: *const f64,
    out: *mut f64,
) -> MnsStatus {
    guard(|| {
        let profile = if thetas.is_null() {
            ThetaProfile::WorstCase
        } else {
            ThetaProfile::Explicit(slice(thetas, n, "thetas")?.to_vec())
        };
        write(out, ere_single_photon(n, eta, alpha, &profile)?, "out")
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mns_iqp_ere_bound(n: usize, p_d: f64, alpha: f64, out: *mut f64) -> MnsStatus {
    guard(|| write(out, iqp_ere_bound(n, p_d, alpha)?, "out"))
}

/// Smallest χ keeping `1 − epsilon` of the product spectrum. Site `j` has
/// `lengths[j]` eigenvalues, stored back to back in `eigenvalues`.
///
/// # Safety
/// `lengths` must hold `sites` values, `eigenvalues` their sum, and `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn mns_required_bond_dimension(
    eigenvalues: *const f64,
    lengths: *const usize,
    sites: usize,
    epsilon: f64,
    cap: u64,
    out: *mut MnsBondEstimate,
) -> MnsStatus {
    guard(|| {
        let lengths = slice(lengths, sites, "lengths")?;
        let total = lengths.iter().sum();
        let values = slice(eigenvalues, total, "eigenvalues")?;
        let mut offset = 0;
        let spectra = lengths
            .iter()
            .map(|&l| {
                let s = SiteSpectrum::new(values[offset..offset + l].to_vec());
                offset += l;
                s
            })
            .collect::<Result<Vec<_>, _>>()?;
        match required_bond_dimension(&spectra, epsilon, cap) {
            Ok(r) => write(
                out,
                MnsBondEstimate {
                    chi_required: r.chi_required,
                    retained_weight: r.retained_weight,
                    threshold_log: r.threshold_log,
                    memory_bytes: r.memory_bytes,
                    pruned_branches: r.pruned_branches,
                },
                "out",
            ),
            Err(e @ MnsError::CapExceeded { lower_bound, .. }) => {
                write(out, MnsBondEstimate { chi_required: lower_bound, ..Default::default() }, "out")?;
                Err(e.into())
            }
            Err(e) => Err(e.into()),
        }
    })
}

/// Permanent of a dim×dim matrix (row-major, interleaved).
///
/// # Safety
/// `matrix` must hold `2·dim²` doubles; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mns_permanent(matrix: *const f64, dim: usize, re: *mut f64, im: *mut f64) -> MnsStatus {
    guard(|| {
        let p = permanent(&square_matrix(matrix, dim, "matrix")?)?;
        write(re, p.re, "re")?;
        write(im, p.im, "im")
    })
}

/// Haar-random dim×dim unitary into `out` (row-major, interleaved).
///
/// # Safety
/// `out` must hold `2·dim²` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn mns_haar_unitary(dim: usize, seed: u64, out: *mut f64) -> MnsStatus {
    guard(|| {
        if dim == 0 {
            return Err(Failure::new(MnsStatus::InvalidArgument, "dim must be positive"));
        }
        let u = haar_unitary(dim, seed)?;
        let buf = slice_mut(out, 2 * dim * dim, "out")?;
        for (pair, z) in buf.chunks_exact_mut(2).zip(u.as_slice()) {
            pair[0] = z.re;
            pair[1] = z.im;
        }
        Ok(())
    })
}
