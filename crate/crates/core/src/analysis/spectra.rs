use std::f64::consts::FRAC_PI_4;

use crate::error::{check_half_interval, check_positive, check_unit_interval, MnsError, Result};
use crate::iqp::phi_amplitudes;
use crate::linalg::{svd, ComplexMatrix, C64};
use crate::mps::renyi_entropy;
use crate::photonic::Parity;

const SPECTRUM_SUM_TOL: f64 = 1e-12;

/// Eigenvalues of one tensor factor of a reduced density matrix,
/// nonincreasing and summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct SiteSpectrum(Vec<f64>);

impl SiteSpectrum {
    /// Sorts descending and clamps round-off negatives; rejects vectors that
    /// are not probability distributions within 1e−12.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.iter().any(|x| !x.is_finite() || *x < -SPECTRUM_SUM_TOL) {
            return Err(MnsError::InvalidParameter(format!("invalid spectrum {values:?}")));
        }
        values.iter_mut().for_each(|x| *x = x.max(0.0));
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > SPECTRUM_SUM_TOL {
            return Err(MnsError::InvalidParameter(format!("spectrum sums to {sum}")));
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(Self(values))
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.0
    }

    pub fn renyi(&self, alpha: f64) -> Result<f64> {
        renyi_entropy(&self.0, alpha)
    }
}

/// Per-mode beam-splitter angles: all π/4, or explicit values.
#[derive(Clone, Debug, PartialEq)]
pub enum ThetaProfile {
    WorstCase,
    Explicit(Vec<f64>),
}

impl ThetaProfile {
    pub fn thetas(&self, n: usize) -> Result<Vec<f64>> {
        match self {
            ThetaProfile::WorstCase => Ok(vec![FRAC_PI_4; n]),
            ThetaProfile::Explicit(t) if t.len() == n => Ok(t.clone()),
            ThetaProfile::Explicit(t) => Err(MnsError::Shape(format!(
                "{} angles for {n} modes",
                t.len()
            ))),
        }
    }
}

/// `c0,1 = (1 ± √(1 − η² sin² 2θ))/2`.
pub fn single_photon_site_spectrum(eta: f64, theta: f64) -> Result<SiteSpectrum> {
    check_unit_interval("eta", eta)?;
    let s = (2.0 * theta).sin();
    let r = (1.0 - eta * eta * s * s).max(0.0).sqrt();
    SiteSpectrum::new(vec![(1.0 + r) / 2.0, (1.0 - r) / 2.0])
}

fn ln_binomial(n: usize, k: usize) -> f64 {
    let lf = |m: usize| (2..=m).map(|x| (x as f64).ln()).sum::<f64>();
    lf(n) - lf(k) - lf(n - k)
}

/// Squared singular values of the two-mode coefficient matrix of a lossy
/// `|n⟩` branch split at angle θ.
pub fn fock_site_spectrum(n: usize, eta: f64, theta: f64) -> Result<SiteSpectrum> {
    check_unit_interval("eta", eta)?;
    if n == 0 {
        return Err(MnsError::DegenerateInput("Fock spectrum with n = 0".into()));
    }
    let (c, s) = (theta.cos(), theta.sin());
    let psi = ComplexMatrix::from_fn(n + 1, n + 1, |l, m| {
        let k = l + m;
        if k > n {
            return C64::new(0.0, 0.0);
        }
        let w = (ln_binomial(n, k) + ln_binomial(k, l)).exp()
            * eta.powi(k as i32)
            * (1.0 - eta).powi((n - k) as i32);
        C64::new(w.sqrt() * c.powi(l as i32) * s.powi(m as i32), 0.0)
    });
    let values: Vec<f64> = svd(&psi)?.singular_values.iter().map(|x| x * x).collect();
    let sum: f64 = values.iter().sum();
    SiteSpectrum::new(values.iter().map(|x| x / sum).collect())
}

/// `λ± = (1 ± √(1−ζ))/2` with
/// `ζ = e^{−4γ²(1−η)} (1−e^{−4γ²η cos²θ})(1−e^{−4γ²η sin²θ}) / (1 ∓ e^{−2γ²})²`,
/// minus for odd parity.
pub fn cat_site_spectrum(gamma: f64, parity: Parity, eta: f64, theta: f64) -> Result<SiteSpectrum> {
    check_positive("gamma", gamma)?;
    check_unit_interval("eta", eta)?;
    let g2 = gamma * gamma;
    let sign = match parity {
        Parity::Odd => -1.0,
        Parity::Even => 1.0,
    };
    let denom = (1.0 + sign * (-2.0 * g2).exp()).powi(2);
    let zeta = (-4.0 * g2 * (1.0 - eta)).exp()
        * (-(-4.0 * g2 * eta * theta.cos().powi(2)).exp_m1())
        * (-(-4.0 * g2 * eta * theta.sin().powi(2)).exp_m1())
        / denom;
    let r = (1.0 - zeta).clamp(0.0, 1.0).sqrt();
    SiteSpectrum::new(vec![(1.0 + r) / 2.0, (1.0 - r) / 2.0])
}

/// Sum of per-site Rényi entropies.
pub fn ere_from_spectra(spectra: &[SiteSpectrum], alpha: f64) -> Result<f64> {
    spectra.iter().map(|s| s.renyi(alpha)).sum()
}

pub fn single_photon_spectra(n: usize, eta: f64, thetas: &ThetaProfile) -> Result<Vec<SiteSpectrum>> {
    thetas.thetas(n)?.into_iter().map(|t| single_photon_site_spectrum(eta, t)).collect()
}

pub fn fock_spectra(n: usize, photons: usize, eta: f64, thetas: &ThetaProfile) -> Result<Vec<SiteSpectrum>> {
    thetas.thetas(n)?.into_iter().map(|t| fock_site_spectrum(photons, eta, t)).collect()
}

pub fn cat_spectra(
    n: usize,
    gamma: f64,
    parity: Parity,
    eta: f64,
    thetas: &ThetaProfile,
) -> Result<Vec<SiteSpectrum>> {
    thetas.thetas(n)?.into_iter().map(|t| cat_site_spectrum(gamma, parity, eta, t)).collect()
}

/// Half-cut Rényi entropy of `n` lossy single photons.
pub fn ere_single_photon(n: usize, eta: f64, alpha: f64, thetas: &ThetaProfile) -> Result<f64> {
    ere_from_spectra(&single_photon_spectra(n, eta, thetas)?, alpha)
}

pub fn ere_fock(n: usize, photons: usize, eta: f64, alpha: f64, thetas: &ThetaProfile) -> Result<f64> {
    ere_from_spectra(&fock_spectra(n, photons, eta, thetas)?, alpha)
}

pub fn ere_cat(
    n: usize,
    gamma: f64,
    parity: Parity,
    eta: f64,
    alpha: f64,
    thetas: &ThetaProfile,
) -> Result<f64> {
    ere_from_spectra(&cat_spectra(n, gamma, parity, eta, thetas)?, alpha)
}

/// `N η^{2α} / (1−α)` for 0 < α < 1.
pub fn ere_upper_bound(n: usize, eta: f64, alpha: f64) -> Result<f64> {
    check_unit_interval("eta", eta)?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(MnsError::Domain { name: "alpha", value: alpha, expected: "(0, 1)" });
    }
    Ok(n as f64 * eta.powf(2.0 * alpha) / (1.0 - alpha))
}

/// `α N η² / (2(α−1))` for α > 1.
pub fn ere_lower_bound(n: usize, eta: f64, alpha: f64) -> Result<f64> {
    check_unit_interval("eta", eta)?;
    if !(alpha > 1.0 && alpha.is_finite()) {
        return Err(MnsError::Domain { name: "alpha", value: alpha, expected: "> 1" });
    }
    Ok(alpha * n as f64 * eta * eta / (2.0 * (alpha - 1.0)))
}

/// `(n / (2(1−α))) ln(q0^{2α} + q1^{2α})`, Shannon form at α = 1.
pub fn iqp_ere_bound(n: usize, p_d: f64, alpha: f64) -> Result<f64> {
    check_half_interval("p_d", p_d)?;
    check_positive("alpha", alpha)?;
    let (q0, q1) = phi_amplitudes(p_d)?;
    let per_qubit = renyi_entropy(&[q0 * q0, q1 * q1], alpha)?;
    Ok(n as f64 / 2.0 * per_qubit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    #[test]
    fn single_photon_cases() {
        assert_eq!(single_photon_site_spectrum(1.0, FRAC_PI_4).unwrap().eigenvalues(), &[0.5, 0.5]);
        assert_eq!(single_photon_site_spectrum(0.3, 0.0).unwrap().eigenvalues(), &[1.0, 0.0]);
        let s = single_photon_site_spectrum(0.6, FRAC_PI_4).unwrap();
        assert!((s.eigenvalues()[0] - 0.9).abs() < 1e-15);
        assert!(single_photon_site_spectrum(1.2, 0.1).is_err());
    }

    #[test]
    fn ere_cases() {
        let w = ThetaProfile::WorstCase;
        assert!((ere_single_photon(7, 1.0, 0.5, &w).unwrap() - 7.0 * LN_2).abs() < 1e-13);
        assert_eq!(ere_single_photon(7, 0.0, 2.0, &w).unwrap(), 0.0);
        let s = ere_single_photon(10, 0.6, 1.0, &w).unwrap();
        let expect = 10.0 * (-0.9 * 0.9f64.ln() - 0.1 * 0.1f64.ln());
        assert!((s - expect).abs() < 1e-12);
        assert!(ere_single_photon(3, 0.5, 1.0, &ThetaProfile::Explicit(vec![0.1])).is_err());
    }

    #[test]
    fn bounds_arithmetic() {
        assert_eq!(ere_upper_bound(100, 0.0, 0.5).unwrap(), 0.0);
        assert!((ere_upper_bound(100, 0.1, 0.5).unwrap() - 20.0).abs() < 1e-12);
        assert!(ere_upper_bound(10, 0.5, 1.0).is_err());
        assert_eq!(ere_lower_bound(100, 0.0, 2.0).unwrap(), 0.0);
        assert!((ere_lower_bound(100, 0.5, 2.0).unwrap() - 25.0).abs() < 1e-12);
        assert!(ere_lower_bound(10, 0.5, 1.0).is_err());
    }

    #[test]
    fn fock_reduces_to_single_photon() {
        for &(eta, theta) in &[(0.3, 0.2), (0.8, FRAC_PI_4), (1.0, 1.0)] {
            let f = fock_site_spectrum(1, eta, theta).unwrap();
            let s = single_photon_site_spectrum(eta, theta).unwrap();
            for (a, b) in f.eigenvalues().iter().zip(s.eigenvalues()) {
                assert!((a - b).abs() < 1e-14);
            }
        }
        assert!((fock_site_spectrum(3, 0.5, 0.0).unwrap().eigenvalues()[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn cat_limits() {
        let s = cat_site_spectrum(1.0, Parity::Odd, 0.7, 0.0).unwrap();
        assert_eq!(s.eigenvalues(), &[1.0, 0.0]);
        let small = cat_site_spectrum(0.05, Parity::Odd, 0.6, FRAC_PI_4).unwrap();
        let photon = single_photon_site_spectrum(0.6, FRAC_PI_4).unwrap();
        assert!((small.eigenvalues()[0] - photon.eigenvalues()[0]).abs() < 1e-3);
    }

    #[test]
    fn iqp_bound_cases() {
        assert!(iqp_ere_bound(10, 0.5, 0.5).unwrap().abs() < 1e-13);
        assert!((iqp_ere_bound(10, 0.0, 1.0).unwrap() - 5.0 * LN_2).abs() < 1e-14);
        let (q0, q1) = phi_amplitudes(0.2).unwrap();
        // ⊗(q0², q1²) over 5 sites at α = 1/2
        let five_sites = 5.0 * 2.0 * (q0 + q1).ln();
        assert!((iqp_ere_bound(10, 0.2, 0.5).unwrap() - five_sites).abs() < 1e-14);
    }
}
