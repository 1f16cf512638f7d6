//! Per-shot sample records and their JSONL form.

use std::io::Write;

use serde::ser::{Serialize, Serializer};
use serde::Serialize as DeriveSerialize;

use crate::error::Result;

/// Which member of a pure-state decomposition a mode or qubit drew.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BranchLabel {
    Plus,
    Minus,
    /// Fock-decomposition phase φ ∈ [0, 2π).
    Phase(f64),
    /// Cat-decomposition member, 1 or 2.
    Cat(u8),
}

impl BranchLabel {
    /// Exact identity key; equal keys give identical local states.
    pub(crate) fn key(&self) -> u64 {
        match *self {
            BranchLabel::Plus => 0,
            BranchLabel::Minus => 1,
            BranchLabel::Cat(k) => 2 + k as u64,
            BranchLabel::Phase(x) => x.to_bits(),
        }
    }
}

impl Serialize for BranchLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            BranchLabel::Plus => s.serialize_str("+"),
            BranchLabel::Minus => s.serialize_str("-"),
            BranchLabel::Phase(x) => s.serialize_f64(x),
            BranchLabel::Cat(k) => s.serialize_u8(k),
        }
    }
}

/// One trajectory: its branch, outcome and truncation error.
#[derive(Clone, Debug, PartialEq, DeriveSerialize)]
pub struct SampleRecord {
    pub shot: u64,
    pub branch_labels: Vec<BranchLabel>,
    pub outcome: Vec<usize>,
    pub discarded_weight: f64,
    /// Largest bond dimension the trajectory reached.
    pub chi: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl SampleRecord {
    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }
}

/// One JSON object per line.
pub fn write_jsonl(records: &[SampleRecord], w: &mut impl Write) -> Result<()> {
    for r in records {
        let line = serde_json::to_string(r).expect("records always serialize");
        writeln!(w, "{line}")?;
    }
    Ok(())
}
