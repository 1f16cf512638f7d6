use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{MnsError, Result};
use crate::linalg::{ComplexMatrix, C64, ZERO};
use crate::photonic::haar_rows;

/// `8 χ² M d` bytes.
pub fn memory_estimate(chi: u64, modes: usize, local_dim: usize) -> f64 {
    8.0 * (chi as f64).powi(2) * modes as f64 * local_dim as f64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalingMode {
    /// Least-squares slope of S against ln N over the trailing half.
    LogSlope,
    /// Slope of ln S against ln N over the whole series.
    PowerFit,
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Coefficient of determination of the least-squares line through `(xs, ys)`.
pub fn r_squared(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let b = slope(xs, ys);
    let ss_res: f64 = xs.iter().zip(ys).map(|(x, y)| (y - my - b * (x - mx)).powi(2)).sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if ss_tot == 0.0 {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    }
}

/// Growth exponent of an entropy series `(N, S)`.
pub fn scaling_diagnostic(series: &[(f64, f64)], mode: ScalingMode) -> Result<f64> {
    if series.len() < 4 {
        return Err(MnsError::InsufficientData(format!(
            "{} points; at least 4 are needed",
            series.len()
        )));
    }
    if series.windows(2).any(|w| !(w[1].0 > w[0].0)) || series[0].0 <= 0.0 {
        return Err(MnsError::InvalidParameter("N must be positive and strictly increasing".into()));
    }
    match mode {
        ScalingMode::LogSlope => {
            let tail = &series[series.len() / 2..];
            let xs: Vec<f64> = tail.iter().map(|p| p.0.ln()).collect();
            let ys: Vec<f64> = tail.iter().map(|p| p.1).collect();
            Ok(slope(&xs, &ys))
        }
        ScalingMode::PowerFit => {
            if let Some(p) = series.iter().find(|p| !(p.1 > 0.0)) {
                return Err(MnsError::Domain { name: "entropy", value: p.1, expected: "> 0 for a power fit" });
            }
            let xs: Vec<f64> = series.iter().map(|p| p.0.ln()).collect();
            let ys: Vec<f64> = series.iter().map(|p| p.1.ln()).collect();
            Ok(slope(&xs, &ys))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CommutationSummary {
    pub mean_abs: f64,
    pub stderr: f64,
}

/// `|Σ_{m<l} U_jm U*_km| / √(Σ_{m<l}|U_jm|² Σ_{m<l}|U_km|²)`.
pub fn normalized_commutator(u: &ComplexMatrix, j: usize, k: usize, l: usize) -> f64 {
    let (rj, rk) = (&u.row(j)[..l], &u.row(k)[..l]);
    let cross: C64 = rj.iter().zip(rk).fold(ZERO, |acc, (a, b)| acc + a * b.conj());
    let nj: f64 = rj.iter().map(|z| z.norm_sqr()).sum();
    let nk: f64 = rk.iter().map(|z| z.norm_sqr()).sum();
    cross.norm() / (nj * nk).sqrt()
}

/// Monte-Carlo mean of [`normalized_commutator`] over Haar unitaries on
/// `m` modes, using the disjoint row pairs (2i, 2i+1), i < `pair_count`.
pub fn commutation_statistics(
    m: usize,
    l: usize,
    pair_count: usize,
    trials: usize,
    seed: u64,
) -> Result<CommutationSummary> {
    if l == 0 || l >= m {
        return Err(MnsError::InvalidParameter(format!("cut {l} must satisfy 1 <= l < {m}")));
    }
    if pair_count == 0 || 2 * pair_count > m || trials == 0 {
        return Err(MnsError::InvalidParameter(format!(
            "{pair_count} disjoint pairs and {trials} trials on {m} modes"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(pair_count * trials);
    for _ in 0..trials {
        let u = haar_rows(m, 2 * pair_count, rng.random())?;
        values.extend((0..pair_count).map(|i| normalized_commutator(&u, 2 * i, 2 * i + 1, l)));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = if values.len() > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    Ok(CommutationSummary { mean_abs: mean, stderr: (var / n).sqrt() })
}
