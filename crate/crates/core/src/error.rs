use thiserror::Error;

/// Every failure the toolkit reports.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MnsError {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("{name} = {value} is outside its domain ({expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("local state {index} is not normalized (norm² = {norm_sq})")]
    Normalization { index: usize, norm_sq: f64 },

    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("mode count {0} must be even")]
    Parity(usize),

    #[error("Fock cutoff {cutoff} too small: tail mass {tail:e} >= 1e-14")]
    Cutoff { cutoff: usize, tail: f64 },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("bond dimension exceeds cap {cap} (at least {lower_bound} required)")]
    CapExceeded { cap: u64, lower_bound: u64 },

    #[error("sampling failed at site {site}: conditional norm {norm:e}")]
    Sampling { site: usize, norm: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("outcome spaces differ: {0}")]
    KeyMismatch(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("snapshot: {0}")]
    Snapshot(String),

    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, MnsError>;

impl From<std::io::Error> for MnsError {
    fn from(e: std::io::Error) -> Self {
        MnsError::Io(e.to_string())
    }
}

pub(crate) fn check_unit_interval(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(MnsError::Domain {
            name,
            value,
            expected: "[0, 1]",
        })
    }
}

pub(crate) fn check_half_interval(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=0.5).contains(&value) {
        Ok(())
    } else {
        Err(MnsError::Domain {
            name,
            value,
            expected: "[0, 1/2]",
        })
    }
}

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(MnsError::Domain {
            name,
            value,
            expected: "> 0",
        })
    }
}
