//! Pure-state decompositions of lossy single-photon, Fock and cat inputs.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_positive, check_unit_interval, MnsError, Result};
use crate::linalg::{C64, ZERO};
use crate::record::BranchLabel;

/// Largest coherent-state tail mass a Fock cutoff may leave out.
pub const CAT_TAIL_TOL: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

/// One sampled pure product input.
#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionBranch {
    pub local_pure_states: Vec<Vec<C64>>,
    pub labels: Vec<BranchLabel>,
    pub log_probability: f64,
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `ψ± = √(1−η)|0⟩ ± √η|1⟩`.
pub fn single_photon_state(eta: f64, label: BranchLabel) -> Result<Vec<C64>> {
    check_unit_interval("eta", eta)?;
    let sign = match label {
        BranchLabel::Plus => 1.0,
        BranchLabel::Minus => -1.0,
        other => {
            return Err(MnsError::InvalidParameter(format!(
                "single-photon branch label {other:?}"
            )))
        }
    };
    Ok(vec![real((1.0 - eta).sqrt()), real(sign * eta.sqrt())])
}

pub fn sample_single_photon_branch(eta: f64, modes: usize, seed: u64) -> Result<DecompositionBranch> {
    single_photon_branch_with(eta, modes, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn single_photon_branch_with<R: Rng + ?Sized>(
    eta: f64,
    modes: usize,
    rng: &mut R,
) -> Result<DecompositionBranch> {
    check_unit_interval("eta", eta)?;
    let labels: Vec<BranchLabel> = (0..modes)
        .map(|_| if rng.random::<bool>() { BranchLabel::Plus } else { BranchLabel::Minus })
        .collect();
    let local_pure_states = labels
        .iter()
        .map(|&l| single_photon_state(eta, l))
        .collect::<Result<_>>()?;
    Ok(DecompositionBranch {
        local_pure_states,
        labels,
        log_probability: -(modes as f64) * std::f64::consts::LN_2,
    })
}

fn ln_binomial(n: usize, k: usize) -> f64 {
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

pub(crate) fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

/// Binomial loss weights `C(n,k) η^k (1−η)^{n−k}`, k = 0..=n.
pub fn binomial_weights(n: usize, eta: f64) -> Vec<f64> {
    (0..=n)
        .map(|k| {
            let lw = |p: f64, e: usize| if e == 0 { 0.0 } else { e as f64 * p.ln() };
            (ln_binomial(n, k) + lw(eta, k) + lw(1.0 - eta, n - k)).exp()
        })
        .collect()
}

/// `Σ_k √(C(n,k) η^k (1−η)^{n−k}) e^{iφk} |k⟩`.
pub fn fock_branch_state(n: usize, eta: f64, phi: f64) -> Result<Vec<C64>> {
    check_unit_interval("eta", eta)?;
    if n == 0 {
        return Err(MnsError::DegenerateInput(
            "Fock input with n = 0 is vacuum".into(),
        ));
    }
    Ok(binomial_weights(n, eta)
        .into_iter()
        .enumerate()
        .map(|(k, w)| C64::from_polar(w.sqrt(), phi * k as f64))
        .collect())
}

pub fn sample_fock_branch(n: usize, eta: f64, modes: usize, seed: u64) -> Result<DecompositionBranch> {
    fock_branch_with(n, eta, modes, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn fock_branch_with<R: Rng + ?Sized>(
    n: usize,
    eta: f64,
    modes: usize,
    rng: &mut R,
) -> Result<DecompositionBranch> {
    fock_branch_state(n, eta, 0.0)?;
    let phases: Vec<f64> = (0..modes).map(|_| rng.random::<f64>() * 2.0 * PI).collect();
    Ok(DecompositionBranch {
        local_pure_states: phases
            .iter()
            .map(|&p| fock_branch_state(n, eta, p))
            .collect::<Result<_>>()?,
        labels: phases.into_iter().map(BranchLabel::Phase).collect(),
        log_probability: -(modes as f64) * (2.0 * PI).ln(),
    })
}

/// Fock amplitudes of the coherent state |β⟩ for real β, k = 0..=cutoff.
pub fn coherent_amplitudes(beta: f64, cutoff: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(cutoff + 1);
    let mut amp = (-beta * beta / 2.0).exp();
    for k in 0..=cutoff {
        if k > 0 {
            amp *= beta / (k as f64).sqrt();
        }
        out.push(amp);
    }
    out
}

/// Poisson(γ²) mass above `cutoff`.
pub fn coherent_tail_mass(gamma: f64, cutoff: usize) -> f64 {
    let mu = gamma * gamma;
    let mut term = (-mu).exp();
    for k in 1..=cutoff {
        term *= mu / k as f64;
    }
    let mut tail = 0.0;
    let mut k = cutoff + 1;
    loop {
        term *= mu / k as f64;
        tail += term;
        if term < 1e-18 * tail.max(1e-300) || (k as f64 > mu && term < 1e-30) {
            break;
        }
        k += 1;
    }
    tail
}

/// Smallest cutoff with tail mass below [`CAT_TAIL_TOL`].
pub fn default_cat_cutoff(gamma: f64) -> usize {
    (0..)
        .find(|&c| coherent_tail_mass(gamma, c) < CAT_TAIL_TOL)
        .expect("tail mass vanishes")
}

/// The two cat-decomposition members (ψ1, ψ2) in a Fock basis of size
/// `cutoff + 1`, each renormalized after truncation.
pub fn cat_branch_states(
    gamma: f64,
    parity: Parity,
    eta: f64,
    cutoff: usize,
) -> Result<[Vec<C64>; 2]> {
    check_positive("gamma", gamma)?;
    check_unit_interval("eta", eta)?;
    let tail = coherent_tail_mass(gamma, cutoff);
    if tail >= CAT_TAIL_TOL {
        return Err(MnsError::Cutoff { cutoff, tail });
    }
    let g2 = gamma * gamma;
    let overlap = (-2.0 * g2).exp();
    let (c, sign) = match parity {
        Parity::Odd => ((2.0 * (1.0 - overlap)).sqrt(), -1.0),
        Parity::Even => ((2.0 * (1.0 + overlap)).sqrt(), 1.0),
    };
    let k = (-2.0 * g2 * (1.0 - eta)).exp();
    let a_coef = ((1.0 + k).sqrt() + (1.0 - k).sqrt()) / (2f64.sqrt() * c);
    let b_coef = ((1.0 + k).sqrt() - (1.0 - k).sqrt()) / (2f64.sqrt() * c);

    let plus = coherent_amplitudes(gamma * eta.sqrt(), cutoff);
    // |−a⟩ flips odd Fock components
    let minus: Vec<f64> = plus
        .iter()
        .enumerate()
        .map(|(n, &x)| if n % 2 == 1 { -x } else { x })
        .collect();
    let combine = |ca: f64, cm: f64| -> Vec<C64> {
        let v: Vec<f64> = plus.iter().zip(&minus).map(|(p, m)| ca * p + cm * m).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.into_iter().map(|x| real(x / norm)).collect()
    };
    // odd:  ψ1 = A|a⟩ − B|−a⟩, ψ2 = −B|a⟩ + A|−a⟩
    // even: ψ1 = A|a⟩ + B|−a⟩, ψ2 =  B|a⟩ + A|−a⟩
    Ok([
        combine(a_coef, sign * b_coef),
        combine(sign * b_coef, a_coef),
    ])
}

pub fn sample_cat_branch(
    gamma: f64,
    parity: Parity,
    eta: f64,
    modes: usize,
    cutoff: usize,
    seed: u64,
) -> Result<DecompositionBranch> {
    let states = cat_branch_states(gamma, parity, eta, cutoff)?;
    Ok(cat_branch_from(&states, modes, &mut ChaCha8Rng::seed_from_u64(seed)))
}

pub(crate) fn cat_branch_from<R: Rng + ?Sized>(
    states: &[Vec<C64>; 2],
    modes: usize,
    rng: &mut R,
) -> DecompositionBranch {
    let picks: Vec<u8> = (0..modes).map(|_| if rng.random::<bool>() { 1 } else { 2 }).collect();
    DecompositionBranch {
        local_pure_states: picks.iter().map(|&p| states[p as usize - 1].clone()).collect(),
        labels: picks.into_iter().map(BranchLabel::Cat).collect(),
        log_probability: -(modes as f64) * std::f64::consts::LN_2,
    }
}

/// Pads a local state with zeros up to dimension `d`.
pub(crate) fn pad(v: &[C64], d: usize) -> Result<Vec<C64>> {
    if v.len() > d {
        return Err(MnsError::InvalidParameter(format!(
            "local state of dimension {} exceeds local dimension {d}",
            v.len()
        )));
    }
    let mut out = v.to_vec();
    out.resize(d, ZERO);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn outer_avg(states: &[Vec<C64>]) -> Vec<Vec<C64>> {
        let d = states[0].len();
        let mut m = vec![vec![ZERO; d]; d];
        for v in states {
            for i in 0..d {
                for j in 0..d {
                    m[i][j] += v[i] * v[j].conj() / states.len() as f64;
                }
            }
        }
        m
    }

    #[test]
    fn single_photon_average() {
        let p = single_photon_state(0.4, BranchLabel::Plus).unwrap();
        let m = single_photon_state(0.4, BranchLabel::Minus).unwrap();
        let avg = outer_avg(&[p, m]);
        assert!((avg[0][0].re - 0.6).abs() < 1e-15);
        assert!((avg[1][1].re - 0.4).abs() < 1e-15);
        assert!(avg[0][1].norm() < 1e-15);
    }

    #[test]
    fn single_photon_vacuum_at_zero_eta() {
        let b = sample_single_photon_branch(0.0, 4, 1).unwrap();
        for v in &b.local_pure_states {
            assert_eq!(v[1].norm(), 0.0);
        }
    }

    #[test]
    fn branch_labels_are_seeded() {
        let a = sample_single_photon_branch(0.5, 5, 12).unwrap();
        let b = sample_single_photon_branch(0.5, 5, 12).unwrap();
        assert_eq!(a.labels, b.labels);
        assert!((a.log_probability + 5.0 * 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn fock_quadrature_kills_coherences() {
        let n = 3;
        let states: Vec<_> = (0..=n)
            .map(|m| fock_branch_state(n, 0.5, 2.0 * PI * m as f64 / (n + 1) as f64).unwrap())
            .collect();
        let avg = outer_avg(&states);
        let w = binomial_weights(n, 0.5);
        for (i, row) in avg.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let expect = if i == j { w[i] } else { 0.0 };
                assert!((x - real(expect)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn fock_special_cases() {
        let v = fock_branch_state(1, 0.3, 0.7).unwrap();
        assert!((v[0].re - 0.7f64.sqrt()).abs() < 1e-15);
        assert!((v[1] - C64::from_polar(0.3f64.sqrt(), 0.7)).norm() < 1e-15);
        let v = fock_branch_state(2, 1.0, 0.4).unwrap();
        assert!(v[0].norm() < 1e-15 && v[1].norm() < 1e-15);
        assert!((v[2].norm() - 1.0).abs() < 1e-15);
        assert!(matches!(
            fock_branch_state(0, 0.5, 0.0),
            Err(MnsError::DegenerateInput(_))
        ));
    }

    #[test]
    fn cat_members_are_parity_images() {
        for parity in [Parity::Odd, Parity::Even] {
            let [p1, p2] = cat_branch_states(1.2, parity, 0.6, 30).unwrap();
            for (n, (a, b)) in p1.iter().zip(&p2).enumerate() {
                let s = if n % 2 == 1 { -1.0 } else { 1.0 };
                assert!((a * s - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn cat_lossless_is_pure_cat() {
        let [p1, p2] = cat_branch_states(1.0, Parity::Odd, 1.0, 30).unwrap();
        // k = 1: B = A, so both members equal ± the odd cat
        let overlap: C64 = p1.iter().zip(&p2).map(|(a, b)| a.conj() * b).sum();
        assert!((overlap.norm() - 1.0).abs() < 1e-12);
        assert!(p1.iter().step_by(2).all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn cat_cutoff_errors() {
        assert!(matches!(
            cat_branch_states(3.0, Parity::Even, 0.5, 5),
            Err(MnsError::Cutoff { cutoff: 5, .. })
        ));
        let c = default_cat_cutoff(1.2);
        assert!(coherent_tail_mass(1.2, c) < CAT_TAIL_TOL);
        assert!(coherent_tail_mass(1.2, c - 1) >= CAT_TAIL_TOL);
    }
}
