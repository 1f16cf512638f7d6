//! Exact desk-scale reference simulators and distribution utilities.

mod bond;
mod bosonic;
mod dense;
mod iqp;

pub use bosonic::{
    exact_bs_probability, exact_bs_probability_from, exact_lossy_bs_distribution, lossy_cat_density, lossy_input_density,
    loss_kraus,
};
pub use bond::{brute_force_bond_dimension, BRUTE_FORCE_MAX_PRODUCTS};
pub use dense::{hermitian_eigenvalues, DenseState, DensityMatrix, DENSE_MAX_DIM, DENSITY_MAX_DIM};
pub use iqp::{
    exact_noisy_iqp_distribution, front_loaded_dephasing_density, frame_enumeration_distribution,
    noisy_iqp_density, IQP_ORACLE_MAX_QUBITS,
};

use std::collections::BTreeMap;
use std::io::Write;

use crate::error::{MnsError, Result};
use crate::record::SampleRecord;

/// Outcome distribution keyed by occupation or bit string, in
/// lexicographic order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ProbabilityTable {
    entries: BTreeMap<Vec<usize>, f64>,
}

impl ProbabilityTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Table over every digit string of a dense register (site 0 most
    /// significant).
    pub fn from_dense(dims: &[usize], probs: &[f64]) -> Self {
        let entries = probs
            .iter()
            .enumerate()
            .map(|(mut idx, &p)| {
                let mut digits = vec![0; dims.len()];
                for (k, &d) in dims.iter().enumerate().rev() {
                    digits[k] = idx % d;
                    idx /= d;
                }
                (digits, p)
            })
            .collect();
        Self { entries }
    }

    pub fn insert(&mut self, outcome: Vec<usize>, p: f64) {
        *self.entries.entry(outcome).or_insert(0.0) += p;
    }

    pub fn get(&self, outcome: &[usize]) -> f64 {
        self.entries.get(outcome).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<usize>, f64)> {
        self.entries.iter().map(|(k, &v)| (k, v))
    }

    pub fn total(&self) -> f64 {
        self.entries.values().sum()
    }

    /// Frequencies of the successful records, with no fixed outcome space.
    pub fn empirical(records: &[SampleRecord]) -> Self {
        let ok: Vec<_> = records.iter().filter(|r| r.is_ok()).collect();
        let w = 1.0 / ok.len().max(1) as f64;
        let mut t = Self::new();
        for r in ok {
            t.insert(r.outcome.clone(), w);
        }
        t
    }

    /// Frequencies over the outcome space of `space`; unseen outcomes get 0.
    pub fn empirical_over(space: &Self, records: &[SampleRecord]) -> Result<Self> {
        let mut t = Self {
            entries: space.entries.keys().map(|k| (k.clone(), 0.0)).collect(),
        };
        let ok: Vec<_> = records.iter().filter(|r| r.is_ok()).collect();
        if ok.is_empty() {
            return Err(MnsError::InsufficientData("no successful samples".into()));
        }
        let w = 1.0 / ok.len() as f64;
        for r in ok {
            match t.entries.get_mut(&r.outcome) {
                Some(p) => *p += w,
                None => {
                    return Err(MnsError::KeyMismatch(format!(
                        "sampled outcome {:?} is outside the reference space",
                        r.outcome
                    )))
                }
            }
        }
        Ok(t)
    }

    pub fn write_csv(&self, w: &mut impl Write) -> Result<()> {
        let compact = self.entries.keys().flatten().all(|&x| x < 10);
        writeln!(w, "outcome,probability")?;
        for (k, p) in &self.entries {
            writeln!(w, "{},{p}", format_outcome(k, compact))?;
        }
        Ok(())
    }
}

fn format_outcome(outcome: &[usize], compact: bool) -> String {
    let parts: Vec<String> = outcome.iter().map(usize::to_string).collect();
    if compact {
        parts.concat()
    } else {
        parts.join("-")
    }
}

/// `½ Σ |pa − pb|` over a shared outcome space.
pub fn total_variation_distance(pa: &ProbabilityTable, pb: &ProbabilityTable) -> Result<f64> {
    if pa.len() != pb.len() || pa.entries.keys().zip(pb.entries.keys()).any(|(a, b)| a != b) {
        return Err(MnsError::KeyMismatch(format!(
            "tables have {} and {} outcomes with different keys",
            pa.len(),
            pb.len()
        )));
    }
    Ok(0.5 * pa.entries.values().zip(pb.entries.values()).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(pairs: &[(usize, f64)]) -> ProbabilityTable {
        let mut t = ProbabilityTable::new();
        for &(k, p) in pairs {
            t.insert(vec![k], p);
        }
        t
    }

    #[test]
    fn tvd_cases() {
        let a = table(&[(0, 0.6), (1, 0.4)]);
        assert_eq!(total_variation_distance(&a, &a).unwrap(), 0.0);
        let u = table(&[(0, 0.5), (1, 0.5)]);
        assert!((total_variation_distance(&a, &u).unwrap() - 0.1).abs() < 1e-15);
        let p = table(&[(0, 1.0), (1, 0.0)]);
        let q = table(&[(0, 0.0), (1, 1.0)]);
        assert_eq!(total_variation_distance(&p, &q).unwrap(), 1.0);
        let other = table(&[(0, 0.5), (2, 0.5)]);
        assert!(matches!(
            total_variation_distance(&a, &other),
            Err(MnsError::KeyMismatch(_))
        ));
    }

    #[test]
    fn dense_keys_and_csv() {
        let t = ProbabilityTable::from_dense(&[2, 3], &[0.1, 0.2, 0.3, 0.0, 0.4, 0.0]);
        assert_eq!(t.get(&[1, 1]), 0.4);
        assert_eq!(t.get(&[0, 2]), 0.3);
        let mut out = Vec::new();
        t.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("outcome,probability\n00,0.1\n01,0.2\n"));
        let mut wide = ProbabilityTable::new();
        wide.insert(vec![12, 0], 1.0);
        let mut out = Vec::new();
        wide.write_csv(&mut out).unwrap();
        assert!(String::from_utf8(out).unwrap().contains("12-0,1"));
    }

    #[test]
    fn empirical_rejects_foreign_outcomes() {
        let space = ProbabilityTable::from_dense(&[2], &[0.5, 0.5]);
        let rec = |o: usize| SampleRecord {
            shot: 0,
            branch_labels: vec![],
            outcome: vec![o],
            discarded_weight: 0.0,
            chi: 1,
            error: None,
        };
        let t = ProbabilityTable::empirical_over(&space, &[rec(1), rec(1), rec(0), rec(1)]).unwrap();
        assert_eq!(t.get(&[1]), 0.75);
        assert!(ProbabilityTable::empirical_over(&space, &[rec(2)]).is_err());
    }
}
