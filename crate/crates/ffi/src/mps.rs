use mns::{Gate, MpsState};

use crate::status::{guard, Failure, MnsStatus};
use crate::util::{complex, slice, slice_mut, square_matrix, write};

/// Opaque matrix-product state.
pub struct MnsMps(MpsState);

/// # Safety
/// `mps` must be null or a live handle from [`mns_mps_new_product`].
unsafe fn handle<'a>(mps: *const MnsMps) -> Result<&'a MpsState, Failure> {
    mps.as_ref().map(|h| &h.0).ok_or_else(|| Failure::null("mps"))
}

/// # Safety
/// As [`handle`], with no other live reference.
unsafe fn handle_mut<'a>(mps: *mut MnsMps) -> Result<&'a mut MpsState, Failure> {
    mps.as_mut().map(|h| &mut h.0).ok_or_else(|| Failure::null("mps"))
}

/// Product state of `sites` local states. `dims[i]` is the dimension of
/// site i; `amplitudes` holds all local states back to back as interleaved
/// (re, im) pairs. `max_chi = 0` leaves bonds untruncated.
///
/// # Safety
/// `dims` must hold `sites` values and `amplitudes` `2·Σ dims` doubles;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mns_mps_new_product(
    dims: *const usize,
    sites: usize,
    amplitudes: *const f64,
    max_chi: usize,
    out: *mut *mut MnsMps,
) -> MnsStatus {
    guard(|| {
        let dims = slice(dims, sites, "dims")?;
        let total = dims.iter().try_fold(0usize, |acc, &d| acc.checked_add(d));
        let total = total.ok_or_else(|| Failure::new(MnsStatus::InvalidArgument, "dimension overflow"))?;
        let amps = complex(slice(amplitudes, 2 * total, "amplitudes")?);
        let mut offset = 0;
        let locals: Vec<Vec<_>> = dims
            .iter()
            .map(|&d| {
                let v = amps[offset..offset + d].to_vec();
                offset += d;
                v
            })
            .collect();
        let chi = (max_chi > 0).then_some(max_chi);
        let state = MpsState::product(&locals, chi)?;
        write(out, Box::into_raw(Box::new(MnsMps(state))), "out")
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `mps` must be null or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mns_mps_free(mps: *mut MnsMps) {
    if !mps.is_null() {
        drop(Box::from_raw(mps));
    }
}

/// # Safety
/// `mps` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mns_mps_site_count(mps: *const MnsMps, out: *mut usize) -> MnsStatus {
    guard(|| write(out, handle(mps)?.site_count(), "out"))
}

/// Applies a d×d matrix (row-major, interleaved) on `site`.
///
/// # Safety
/// `mps` must be a live handle and `matrix` hold `2·d²` doubles.
#[no_mangle]
pub unsafe extern "C" fn mns_mps_apply_single(mps: *mut MnsMps, site: usize, matrix: *const f64) -> MnsStatus {
    guard(|| {
        let state = handle_mut(mps)?;
        let d = *state
            .phys_dims()
            .get(site)
            .ok_or_else(|| Failure::new(MnsStatus::InvalidArgument, format!("site {site} out of range")))?;
        let matrix = square_matrix(matrix, d, "matrix")?;
        Ok(state.apply_gate(&Gate::Single { site, matrix })?)
    })
}

/// Applies a (d_a·d_b)² matrix with basis index `s_a·d_b + s_b` on two
/// distinct sites, adjacent or not.
///
/// # Safety
/// `mps` must be a live handle and `matrix` hold `2·(d_a·d_b)²` doubles.
#[no_mangle]
pub unsafe extern "C" fn mns_mps_apply_two(
    mps: *mut MnsMps,
    site_a: usize,
    site_b: usize,
    matrix: *const f64,
) -> MnsStatus {
    guard(|| {
        let state = handle_mut(mps)?;
        let dims = state.phys_dims();
        let (da, db) = match (dims.get(site_a), dims.get(site_b)) {
            (Some(&a), Some(&b)) => (a, b),
            _ => return Err(Failure::new(MnsStatus::InvalidArgument, "site out of range")),
        };
        let matrix = square_matrix(matrix, da * db, "matrix")?;
        Ok(state.apply_gate(&Gate::Two { sites: (site_a, site_b), matrix })?)
    })
}

/// Rényi-α entropy (nats) across `bond`, between sites `bond` and `bond + 1`.
///
/// # Safety
/// `mps` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mns_mps_bond_entropy(mps: *const MnsMps, bond: usize, alpha: f64, out: *mut f64) -> MnsStatus {
    guard(|| write(out, handle(mps)?.bond_entropy(bond, alpha)?, "out"))
}

/// # Safety
/// `mps` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mns_mps_discarded_weight(mps: *const MnsMps, out: *mut f64) -> MnsStatus {
    guard(|| write(out, handle(mps)?.discarded_weight(), "out"))
}

/// # Safety
/// `mps` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mns_mps_max_bond_dim(mps: *const MnsMps, out: *mut usize) -> MnsStatus {
    guard(|| write(out, handle(mps)?.max_bond_dim(), "out"))
}

/// Draws one computational-basis outcome into `outcome[0..len]`; `len`
/// must equal the site count.
///
/// # Safety
/// `mps` must be a live handle and `outcome` hold `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn mns_mps_sample(mps: *const MnsMps, seed: u64, outcome: *mut usize, len: usize) -> MnsStatus {
    guard(|| {
        let state = handle(mps)?;
        if len != state.site_count() {
            return Err(Failure::new(
                MnsStatus::InvalidArgument,
                format!("outcome buffer holds {len} sites, state has {}", state.site_count()),
            ));
        }
        let out = slice_mut(outcome, len, "outcome")?;
        out.copy_from_slice(&state.sample_outcome(seed)?);
        Ok(())
    })
}
