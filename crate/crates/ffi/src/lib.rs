//! C interface to the `mns` toolkit.
//!
//! Every fallible function returns an [`MnsStatus`]; on failure the message
//! is available from [`mns_last_error`] on the same thread. Complex arrays
//! are interleaved `(re, im)` doubles in row-major order. Handles are
//! opaque and released with their `_free` function.

mod analysis;
mod mps;
mod pipeline;
mod status;
mod util;

pub use analysis::*;
pub use mps::*;
pub use pipeline::*;
pub use status::{mns_last_error, MnsStatus};
