use crate::analysis::{SiteSpectrum, TARGET_SLACK};
use crate::error::{MnsError, Result};

/// Largest number of product eigenvalues the brute-force count will form.
pub const BRUTE_FORCE_MAX_PRODUCTS: usize = 1 << 22;

/// Smallest χ whose χ largest product eigenvalues reach `1 − ε`, by forming
/// and sorting every product.
pub fn brute_force_bond_dimension(spectra: &[SiteSpectrum], epsilon: f64) -> Result<u64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(MnsError::Domain { name: "epsilon", value: epsilon, expected: "(0, 1)" });
    }
    let size = spectra
        .iter()
        .try_fold(1usize, |acc, s| acc.checked_mul(s.eigenvalues().len()))
        .filter(|&n| n <= BRUTE_FORCE_MAX_PRODUCTS)
        .ok_or_else(|| MnsError::ResourceLimit("product spectrum too large to enumerate".into()))?;
    let mut products = Vec::with_capacity(size);
    products.push(1.0f64);
    for s in spectra {
        products = products
            .iter()
            .flat_map(|p| s.eigenvalues().iter().map(move |l| p * l))
            .collect();
    }
    products.sort_by(|a, b| b.total_cmp(a));
    let target = 1.0 - epsilon - TARGET_SLACK;
    let mut cum = 0.0;
    for (k, p) in products.iter().enumerate() {
        cum += p;
        if cum >= target {
            return Ok(k as u64 + 1);
        }
    }
    Ok(products.len() as u64)
}
