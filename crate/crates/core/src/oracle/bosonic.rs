use super::dense::DensityMatrix;
use super::ProbabilityTable;
use crate::error::{check_unit_interval, MnsError, Result};
use crate::linalg::{permanent, ComplexMatrix, C64, ZERO};
use crate::photonic::{coherent_amplitudes, InputKind, Interferometer, LossyInputSpec, Parity};

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Kraus operators of pure loss on a `d`-level Fock ladder:
/// `K_m |n⟩ = √(C(n,m) η^{n−m} (1−η)^m) |n−m⟩`.
pub fn loss_kraus(eta: f64, d: usize) -> Result<Vec<ComplexMatrix>> {
    check_unit_interval("eta", eta)?;
    Ok((0..d)
        .map(|m| {
            ComplexMatrix::from_fn(d, d, |row, n| {
                if n < m || row != n - m {
                    return ZERO;
                }
                let binom = (ln_factorial(n) - ln_factorial(m) - ln_factorial(n - m)).exp();
                let w = binom * eta.powi((n - m) as i32) * (1.0 - eta).powi(m as i32);
                C64::new(w.sqrt(), 0.0)
            })
        })
        .collect())
}

fn pure_input(kind: InputKind, d: usize) -> Result<Vec<C64>> {
    let mut v = vec![ZERO; d];
    match kind {
        InputKind::SinglePhoton | InputKind::Fock { .. } => {
            let n = match kind {
                InputKind::Fock { n } => n,
                _ => 1,
            };
            if n >= d {
                return Err(MnsError::InvalidParameter(format!("|{n}⟩ does not fit in d = {d}")));
            }
            v[n] = C64::new(1.0, 0.0);
        }
        InputKind::Cat { parity, gamma, cutoff } => {
            let cutoff = cutoff.unwrap_or(d - 1).min(d - 1);
            let sign = match parity {
                Parity::Even => 1.0,
                Parity::Odd => -1.0,
            };
            let amps = coherent_amplitudes(gamma, cutoff);
            for (k, a) in amps.iter().enumerate() {
                let alt = if k % 2 == 0 { 1.0 } else { -1.0 };
                v[k] = C64::new(a * (1.0 + sign * alt), 0.0);
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            v.iter_mut().for_each(|z| *z /= norm);
        }
    }
    Ok(v)
}

/// Single-mode input state after loss η, on `d` Fock levels.
pub fn lossy_input_density(kind: InputKind, eta: f64, d: usize) -> Result<ComplexMatrix> {
    let psi = pure_input(kind, d)?;
    let mut rho = ComplexMatrix::zeros(d, d);
    for k in loss_kraus(eta, d)? {
        let phi: Vec<C64> = (0..d)
            .map(|i| k.row(i).iter().zip(&psi).map(|(a, b)| a * b).sum())
            .collect();
        for i in 0..d {
            for j in 0..d {
                rho[(i, j)] += phi[i] * phi[j].conj();
            }
        }
    }
    Ok(rho)
}

/// Closed form of a lossy cat state on `cutoff + 1` levels:
/// `(|a⟩⟨a| + |−a⟩⟨−a| ± k(|a⟩⟨−a| + h.c.)) / C²` with `a = γ√η`,
/// `k = e^{−2γ²(1−η)}`, `C² = 2(1 ± e^{−2γ²})`; upper signs for even parity.
pub fn lossy_cat_density(gamma: f64, parity: Parity, eta: f64, cutoff: usize) -> Result<ComplexMatrix> {
    check_unit_interval("eta", eta)?;
    let s = match parity {
        Parity::Even => 1.0,
        Parity::Odd => -1.0,
    };
    let a = gamma * eta.sqrt();
    let k = (-2.0 * gamma * gamma * (1.0 - eta)).exp();
    let c2 = 2.0 * (1.0 + s * (-2.0 * gamma * gamma).exp());
    let plus = coherent_amplitudes(a, cutoff);
    let minus = coherent_amplitudes(-a, cutoff);
    let d = cutoff + 1;
    Ok(ComplexMatrix::from_fn(d, d, |i, j| {
        let v = plus[i] * plus[j] + minus[i] * minus[j] + s * k * (plus[i] * minus[j] + minus[i] * plus[j]);
        C64::new(v / c2, 0.0)
    }))
}

/// Exact photon-number distribution of `spec` through `circuit`, by dense
/// density-matrix evolution.
pub fn exact_lossy_bs_distribution(
    spec: &LossyInputSpec,
    circuit: &Interferometer,
) -> Result<ProbabilityTable> {
    spec.validate()?;
    if circuit.mode_count() != spec.mode_count {
        return Err(MnsError::Shape(format!(
            "circuit has {} modes, input spec {}",
            circuit.mode_count(),
            spec.mode_count
        )));
    }
    let d = spec.local_dim();
    let kind = match spec.kind {
        InputKind::Cat { parity, gamma, .. } => InputKind::Cat {
            parity,
            gamma,
            cutoff: spec.cat_cutoff(),
        },
        other => other,
    };
    let input = lossy_input_density(kind, spec.eta_total, d)?;
    let mut vacuum = ComplexMatrix::zeros(d, d);
    vacuum[(0, 0)] = C64::new(1.0, 0.0);
    let mut locals = vec![vacuum; spec.mode_count];
    for m in spec.input_modes() {
        locals[m] = input.clone();
    }
    let mut rho = DensityMatrix::product(&locals)?;
    for g in circuit.lift(d)?.iter() {
        rho.apply_gate(g)?;
    }
    Ok(ProbabilityTable::from_dense(rho.dims(), &rho.diagonal()))
}

/// Lossless probability of `outcome` for single photons in the first `n`
/// modes: `|Perm U_T|² / Π t_k!`, with `U[j][k]` the amplitude from input
/// mode j to output mode k.
pub fn exact_bs_probability(u: &ComplexMatrix, outcome: &[usize], n: usize) -> Result<f64> {
    let inputs: Vec<usize> = (0..n).collect();
    exact_bs_probability_from(u, &inputs, outcome)
}

pub fn exact_bs_probability_from(u: &ComplexMatrix, inputs: &[usize], outcome: &[usize]) -> Result<f64> {
    let m = u.rows();
    if !u.is_square() || outcome.len() != m || inputs.iter().any(|&i| i >= m) {
        return Err(MnsError::Shape(format!(
            "{}x{} unitary, {} outcome modes",
            u.rows(),
            u.cols(),
            outcome.len()
        )));
    }
    let total: usize = outcome.iter().sum();
    if total != inputs.len() {
        return Err(MnsError::Domain {
            name: "outcome photon number",
            value: total as f64,
            expected: "equal to the input photon number",
        });
    }
    let cols: Vec<usize> = outcome
        .iter()
        .enumerate()
        .flat_map(|(k, &t)| std::iter::repeat_n(k, t))
        .collect();
    let sub = ComplexMatrix::from_fn(inputs.len(), inputs.len(), |r, c| u[(inputs[r], cols[c])]);
    let norm: f64 = outcome.iter().map(|&t| ln_factorial(t)).sum::<f64>().exp();
    Ok(permanent(&sub)?.norm_sqr() / norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::haar_unitary;
    use crate::photonic::{balanced_splitter, ModeGate};

    fn outcomes(m: usize, n: usize) -> Vec<Vec<usize>> {
        if m == 1 {
            return vec![vec![n]];
        }
        (0..=n)
            .flat_map(|k| {
                outcomes(m - 1, n - k).into_iter().map(move |mut rest| {
                    rest.insert(0, k);
                    rest
                })
            })
            .collect()
    }

    #[test]
    fn kraus_is_trace_preserving() {
        let ks = loss_kraus(0.37, 5).unwrap();
        let mut sum = ComplexMatrix::zeros(5, 5);
        for k in &ks {
            let kk = k.adjoint().matmul(k).unwrap();
            for i in 0..5 {
                for j in 0..5 {
                    sum[(i, j)] += kk[(i, j)];
                }
            }
        }
        assert!(sum.max_abs_diff(&ComplexMatrix::identity(5)) < 1e-14);
    }

    #[test]
    fn lossy_cat_matches_kraus_evolution() {
        for parity in [Parity::Even, Parity::Odd] {
            let kind = InputKind::Cat { parity, gamma: 1.3, cutoff: Some(30) };
            let kraus = lossy_input_density(kind, 0.6, 31).unwrap();
            let closed = lossy_cat_density(1.3, parity, 0.6, 30).unwrap();
            assert!(kraus.max_abs_diff(&closed) < 1e-10, "{parity:?}");
        }
    }

    #[test]
    fn splitter_hand_case() {
        let circuit = Interferometer::new(
            2,
            vec![ModeGate { modes: (0, 1), u: balanced_splitter() }],
        )
        .unwrap();
        let spec = LossyInputSpec::new(InputKind::SinglePhoton, 2, 1, 0.5);
        let t = exact_lossy_bs_distribution(&spec, &circuit).unwrap();
        assert!((t.get(&[0, 0]) - 0.5).abs() < 1e-14);
        assert!((t.get(&[1, 0]) - 0.25).abs() < 1e-14);
        assert!((t.get(&[0, 1]) - 0.25).abs() < 1e-14);
        assert!((t.total() - 1.0).abs() < 1e-12);
        let dark = LossyInputSpec::new(InputKind::SinglePhoton, 2, 1, 0.0);
        assert_eq!(exact_lossy_bs_distribution(&dark, &circuit).unwrap().get(&[0, 0]), 1.0);
    }

    #[test]
    fn permanent_probabilities() {
        let id = ComplexMatrix::identity(4);
        assert!((exact_bs_probability(&id, &[1, 1, 0, 0], 2).unwrap() - 1.0).abs() < 1e-15);
        let hom = exact_bs_probability(&balanced_splitter(), &[1, 1], 2).unwrap();
        assert!(hom < 1e-15);
        let u = haar_unitary(5, 11).unwrap();
        let total: f64 = outcomes(5, 2)
            .iter()
            .map(|o| exact_bs_probability(&u, o, 2).unwrap())
            .sum();
        assert!((total - 1.0).abs() < 1e-10);
        assert!(exact_bs_probability(&u, &[1, 1, 1, 0, 0], 2).is_err());
    }
}
