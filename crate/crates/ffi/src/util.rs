use std::ffi::{c_char, CStr};

use mns::{ComplexMatrix, C64};

use crate::status::{Failure, MnsStatus};

/// # Safety
/// `ptr` must be null or point to `len` readable values.
pub(crate) unsafe fn slice<'a, T>(ptr: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(Failure::null(what));
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

/// # Safety
/// `ptr` must be null or point to `len` writable values.
pub(crate) unsafe fn slice_mut<'a, T>(ptr: *mut T, len: usize, what: &str) -> Result<&'a mut [T], Failure> {
    if len == 0 {
        return Ok(&mut []);
    }
    if ptr.is_null() {
        return Err(Failure::null(what));
    }
    Ok(std::slice::from_raw_parts_mut(ptr, len))
}

/// # Safety
/// `ptr` must be null or valid for a write of `T`.
pub(crate) unsafe fn write<T>(ptr: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if ptr.is_null() {
        return Err(Failure::null(what));
    }
    ptr.write(value);
    Ok(())
}

/// # Safety
/// `ptr` must be null or a nul-terminated string.
pub(crate) unsafe fn string<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if ptr.is_null() {
        return Err(Failure::null(what));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| Failure::new(MnsStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

/// Interleaved (re, im) pairs to complex numbers.
pub(crate) fn complex(values: &[f64]) -> Vec<C64> {
    values.chunks_exact(2).map(|p| C64::new(p[0], p[1])).collect()
}

/// # Safety
/// `ptr` must be null or point to `2·dim²` doubles, row-major, interleaved.
pub(crate) unsafe fn square_matrix(ptr: *const f64, dim: usize, what: &str) -> Result<ComplexMatrix, Failure> {
    let values = slice(ptr, 2 * dim * dim, what)?;
    Ok(ComplexMatrix::new(dim, dim, complex(values))?)
}
