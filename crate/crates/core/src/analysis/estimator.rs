//! Smallest bond dimension whose leading product eigenvalues retain
//! `1 − ε` of the weight, by thresholded enumeration in the log domain.
//!
//! Sites with identical spectra are grouped, and each group is enumerated
//! as a multiset of eigenvalue choices with its multinomial multiplicity.
//! A bisection on the log-threshold finds a cut inside the acceptance band;
//! the products between the last two cuts are then sorted to get the exact
//! count.

use super::{memory_estimate, SiteSpectrum};
use crate::error::{MnsError, Result};

/// Width of the retained-weight band that ends the threshold search.
pub const ACCEPTANCE_BAND: f64 = 0.002;
/// Absolute slack on the `1 − ε` target absorbing summation round-off.
pub const TARGET_SLACK: f64 = 1e-12;
const MAX_BISECTIONS: usize = 200;

#[derive(Clone, Debug, PartialEq)]
pub struct EstimatorResult {
    pub chi_required: u64,
    pub retained_weight: f64,
    /// Log of the smallest retained product eigenvalue.
    pub threshold_log: f64,
    /// `8 χ² L d` with L sites and d the largest site spectrum length.
    pub memory_bytes: f64,
    pub pruned_branches: u64,
}

struct Group {
    /// `ln(λ_i / λ_0)` for i ≥ 1, nonincreasing, all ≤ 0.
    ratios: Vec<f64>,
    count: usize,
}

/// One enumerated multiset: its log weight and how many products share it.
#[derive(Clone, Copy)]
struct Combo {
    log_weight: f64,
    multiplicity: u128,
}

struct Enumeration {
    /// Multisets below `keep_below`, kept for the exact final count.
    band: Vec<Combo>,
    above_count: u128,
    above_weight: f64,
    count: u128,
    weight: f64,
    pruned: u64,
    aborted: bool,
}

struct Enumerator<'a> {
    groups: &'a [Group],
    threshold: f64,
    keep_below: f64,
    /// Abort once the total count (or, if unset, the band) exceeds `limit`.
    limit_count: bool,
    limit: u128,
    out: Enumeration,
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(x) => x / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

impl Enumerator<'_> {
    fn run(mut self, base: f64) -> Enumeration {
        self.group(0, base, 1);
        self.out
    }

    fn group(&mut self, g: usize, partial: f64, mult: u128) {
        if g == self.groups.len() {
            self.leaf(partial, mult);
        } else {
            self.choose(g, 0, self.groups[g].count, partial, mult);
        }
    }

    /// Picks how many of the `left` remaining sites of group `g` take
    /// eigenvalue `i + 1`; the rest keep the largest one.
    fn choose(&mut self, g: usize, i: usize, left: usize, partial: f64, mult: u128) {
        let ratios = &self.groups[g].ratios;
        if i == ratios.len() || left == 0 {
            self.group(g + 1, partial, mult);
            return;
        }
        let r = ratios[i];
        for k in 0..=left {
            let lw = partial + k as f64 * r;
            if lw < self.threshold {
                self.out.pruned += 1;
                break;
            }
            self.choose(g, i + 1, left - k, lw, mult.saturating_mul(binomial(left, k)));
            if self.out.aborted {
                return;
            }
        }
    }

    fn leaf(&mut self, log_weight: f64, multiplicity: u128) {
        self.out.count = self.out.count.saturating_add(multiplicity);
        self.out.weight += multiplicity as f64 * log_weight.exp();
        if log_weight < self.keep_below {
            self.out.band.push(Combo { log_weight, multiplicity });
        } else {
            self.out.above_count = self.out.above_count.saturating_add(multiplicity);
            self.out.above_weight += multiplicity as f64 * log_weight.exp();
        }
        let size = if self.limit_count { self.out.count } else { self.out.band.len() as u128 };
        if size > self.limit {
            self.out.aborted = true;
        }
    }
}

fn group_spectra(spectra: &[SiteSpectrum]) -> (Vec<Group>, f64, f64) {
    let mut groups: Vec<(Vec<u64>, Group)> = Vec::new();
    let mut base = 0.0;
    let mut floor = 0.0;
    for s in spectra {
        let ev = s.eigenvalues();
        let top = ev[0];
        base += top.ln();
        let ratios: Vec<f64> = ev[1..].iter().filter(|&&x| x > 0.0).map(|x| (x / top).ln()).collect();
        floor += ratios.last().copied().unwrap_or(0.0);
        let key: Vec<u64> = ev.iter().map(|x| x.to_bits()).collect();
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, g)) => g.count += 1,
            None => groups.push((key, Group { ratios, count: 1 })),
        }
    }
    (groups.into_iter().map(|(_, g)| g).collect(), base, base + floor)
}

/// Smallest χ with the χ largest product eigenvalues summing to ≥ 1 − ε.
/// Fails with [`MnsError::CapExceeded`] when χ would exceed `cap`.
pub fn required_bond_dimension(spectra: &[SiteSpectrum], epsilon: f64, cap: u64) -> Result<EstimatorResult> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(MnsError::Domain { name: "epsilon", value: epsilon, expected: "(0, 1)" });
    }
    if spectra.is_empty() {
        return Err(MnsError::InvalidParameter("no site spectra".into()));
    }
    if cap == 0 {
        return Err(MnsError::InvalidParameter("cap must be at least 1".into()));
    }
    let target = 1.0 - epsilon - TARGET_SLACK;
    let (groups, top, bottom) = group_spectra(spectra);
    let limit = u128::from(cap);
    let enumerate = |threshold: f64, keep_below: f64| {
        Enumerator {
            groups: &groups,
            threshold,
            keep_below,
            limit_count: keep_below == f64::NEG_INFINITY,
            limit,
            out: Enumeration {
                band: Vec::new(),
                above_count: 0,
                above_weight: 0.0,
                count: 0,
                weight: 0.0,
                pruned: 0,
                aborted: false,
            },
        }
        .run(top)
    };

    // hi: known short of the target; lo: enough weight, or too many products
    let mut hi = top + 1.0;
    let mut hi_count: u128 = 0;
    let mut lo = bottom - 1.0;
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if !(mid > lo && mid < hi) {
            break;
        }
        let e = enumerate(mid, f64::NEG_INFINITY);
        if e.aborted || e.weight >= target {
            lo = mid;
            if !e.aborted && e.weight <= target + ACCEPTANCE_BAND {
                break;
            }
        } else {
            hi = mid;
            hi_count = e.count;
        }
    }

    let cap_error = |lower: u128| MnsError::CapExceeded {
        cap,
        lower_bound: u64::try_from(lower).unwrap_or(u64::MAX).max(cap.saturating_add(1)),
    };
    let e = enumerate(lo, hi);
    if e.aborted {
        return Err(cap_error(hi_count + 1));
    }
    let mut band = e.band;
    band.sort_by(|a, b| b.log_weight.total_cmp(&a.log_weight));
    let mut cum = e.above_weight;
    let mut chi = e.above_count;
    let mut last = top;
    for c in &band {
        let w = c.log_weight.exp();
        last = c.log_weight;
        if cum + c.multiplicity as f64 * w >= target {
            let mut need = (((target - cum) / w).ceil() as u128).clamp(1, c.multiplicity);
            if cum + need as f64 * w < target {
                need = (need + 1).min(c.multiplicity);
            }
            cum += need as f64 * w;
            chi += need;
            break;
        }
        cum += c.multiplicity as f64 * w;
        chi += c.multiplicity;
    }
    if chi > limit {
        return Err(cap_error(chi));
    }
    let chi = chi as u64;
    let d = spectra.iter().map(|s| s.eigenvalues().len()).max().unwrap_or(1);
    Ok(EstimatorResult {
        chi_required: chi,
        retained_weight: cum.min(1.0),
        threshold_log: last,
        memory_bytes: memory_estimate(chi, spectra.len(), d),
        pruned_branches: e.pruned,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::single_photon_site_spectrum;
    use std::f64::consts::FRAC_PI_4;

    fn two_level(p: f64) -> SiteSpectrum {
        SiteSpectrum::new(vec![p, 1.0 - p]).unwrap()
    }

    #[test]
    fn two_site_case() {
        let r = required_bond_dimension(&[two_level(0.9), two_level(0.9)], 0.01, 100).unwrap();
        assert_eq!(r.chi_required, 3);
        assert!((r.retained_weight - 0.99).abs() < 1e-12);
        assert!((r.threshold_log - (0.09f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn loose_epsilon_needs_one() {
        let s: Vec<_> = [0.7, 0.6, 0.8].iter().map(|&p| two_level(p)).collect();
        assert_eq!(required_bond_dimension(&s, 0.999, 10).unwrap().chi_required, 1);
    }

    #[test]
    fn cap_abort_carries_bound() {
        let s = vec![two_level(0.5); 12];
        match required_bond_dimension(&s, 0.01, 100) {
            Err(MnsError::CapExceeded { cap: 100, lower_bound }) => assert!(lower_bound > 100),
            other => panic!("{other:?}"),
        }
        assert_eq!(required_bond_dimension(&s, 0.01, 4096).unwrap().chi_required, 4056);
    }

    #[test]
    fn forty_photon_worst_case() {
        let s = vec![single_photon_site_spectrum(0.5, FRAC_PI_4).unwrap(); 40];
        let r = required_bond_dimension(&s, 0.01, u64::MAX).unwrap();
        assert!(r.chi_required > 3_000_000 && r.chi_required < 30_000_000, "{}", r.chi_required);
        assert!(r.retained_weight >= 0.99 - 1e-12);
    }

    #[test]
    fn rejects_bad_epsilon() {
        assert!(required_bond_dimension(&[two_level(0.9)], 0.0, 10).is_err());
        assert!(required_bond_dimension(&[two_level(0.9)], 1.0, 10).is_err());
    }
}
