use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use mns::MnsError;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MnsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    ResourceLimit = 4,
    CapExceeded = 5,
    Parse = 6,
    Numerical = 7,
    Io = 8,
    Panic = 9,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

pub(crate) struct Failure {
    pub status: MnsStatus,
    pub message: String,
}

impl Failure {
    pub fn new(status: MnsStatus, message: impl Into<String>) -> Self {
        Self { status, message: message.into() }
    }

    pub fn null(what: &str) -> Self {
        Self::new(MnsStatus::NullPointer, format!("{what} is null"))
    }
}

impl From<MnsError> for Failure {
    fn from(e: MnsError) -> Self {
        let status = match &e {
            MnsError::Domain { .. } => MnsStatus::Domain,
            MnsError::InvalidDimension(_)
            | MnsError::Shape(_)
            | MnsError::InvalidParameter(_)
            | MnsError::Normalization { .. }
            | MnsError::NotUnitary(_)
            | MnsError::Parity(_)
            | MnsError::Cutoff { .. }
            | MnsError::DegenerateInput(_) => MnsStatus::InvalidArgument,
            MnsError::ResourceLimit(_) => MnsStatus::ResourceLimit,
            MnsError::CapExceeded { .. } => MnsStatus::CapExceeded,
            MnsError::Parse { .. } => MnsStatus::Parse,
            MnsError::Io(_) => MnsStatus::Io,
            MnsError::Sampling { .. }
            | MnsError::InsufficientData(_)
            | MnsError::KeyMismatch(_)
            | MnsError::Numerical(_)
            | MnsError::Snapshot(_) => MnsStatus::Numerical,
        };
        Self::new(status, e.to_string())
    }
}

fn set_last_error(message: Option<String>) {
    let c = message.map(|m| CString::new(m.replace('\0', " ")).expect("interior nuls removed"));
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

/// Runs `body`, recording any failure or panic as this thread's last error.
pub(crate) fn guard(body: impl FnOnce() -> Result<(), Failure>) -> MnsStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error(None);
            MnsStatus::Ok
        }
        Ok(Err(f)) => {
            set_last_error(Some(f.message));
            f.status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(Some(format!("panic: {msg}")));
            MnsStatus::Panic
        }
    }
}

/// Message of the last failed call on this thread, or null after a
/// successful one. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn mns_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}
