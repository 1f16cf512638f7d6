use std::f64::consts::LN_10;
use std::fmt::Write as _;

use clap::{Args, ValueEnum};
use mns::analysis::{
    cat_spectra, commutation_statistics, ere_from_spectra, fock_spectra, iqp_ere_bound, memory_estimate,
    required_bond_dimension, single_photon_spectra, SiteSpectrum, ThetaProfile,
};
use mns::iqp::{phi_amplitudes, NoiseSpec};
use mns::linalg::ComplexMatrix;
use mns::photonic::{haar_rows, theta_profile, ustc_like_gatelist, InputKind, LossyInputSpec};
use mns::{MnsError, Result};
use rayon::prelude::*;

use super::error::{CliError, CliResult};
use super::{Emit, NoiseArg, ParityArg};

const GRID_HEADER: &str = "N,eta_or_p,alpha,theta_mode,chi,memory_bytes,entropy";
/// Largest Haar isometry (rows × modes) a grid point may draw.
const HAAR_MAX_ENTRIES: usize = 1 << 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GridInput {
    SinglePhoton,
    Fock,
    Cat,
    Iqp,
    /// One explicit site spectrum repeated on N sites.
    Spectrum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EtaScaling {
    /// η = c / √N
    InverseSqrt,
    /// η = c N^(−1/3)
    InverseCbrt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ThetaArg {
    WorstCase,
    Haar,
    Ustc,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long, value_enum, env = "MNS_INPUT", default_value_t = GridInput::SinglePhoton)]
    pub input: GridInput,
    /// Photon, qubit or site counts.
    #[arg(long, env = "MNS_N_VALUES", value_delimiter = ',', required = true)]
    pub n_values: Vec<usize>,
    #[arg(long, env = "MNS_ETA_VALUES", value_delimiter = ',')]
    pub eta_values: Vec<f64>,
    /// Coefficients c of an N-dependent transmission.
    #[arg(long, env = "MNS_ETA_COEFFICIENTS", value_delimiter = ',')]
    pub eta_coefficients: Vec<f64>,
    #[arg(long, value_enum, env = "MNS_ETA_SCALING", default_value_t = EtaScaling::InverseSqrt)]
    pub eta_scaling: EtaScaling,
    #[arg(long, env = "MNS_ALPHA_VALUES", value_delimiter = ',', default_value = "1")]
    pub alpha_values: Vec<f64>,
    #[arg(long, value_enum, env = "MNS_THETA", default_value_t = ThetaArg::WorstCase)]
    pub theta: ThetaArg,
    /// Mode count of the photonic register; N² when unset.
    #[arg(long, env = "MNS_MODES")]
    pub modes: Option<usize>,
    #[arg(long, env = "MNS_FOCK_N", default_value_t = 1)]
    pub fock_n: usize,
    #[arg(long, env = "MNS_GAMMA", default_value_t = 1.0)]
    pub gamma: f64,
    #[arg(long, value_enum, env = "MNS_PARITY", default_value_t = ParityArg::Odd)]
    pub parity: ParityArg,
    /// IQP per-layer noise rates.
    #[arg(long, env = "MNS_RATES", value_delimiter = ',')]
    pub rates: Vec<f64>,
    #[arg(long, env = "MNS_DEPTHS", value_delimiter = ',', default_value = "1")]
    pub depths: Vec<usize>,
    #[arg(long, value_enum, env = "MNS_NOISE", default_value_t = NoiseArg::Dephasing)]
    pub noise: NoiseArg,
    #[arg(long, env = "MNS_EXTRA_NOISE_LAYER")]
    pub extra_noise_layer: bool,
    #[arg(long, env = "MNS_SITE_SPECTRUM", value_delimiter = ',')]
    pub site_spectrum: Vec<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BondArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, env = "MNS_EPSILON", default_value_t = 0.01)]
    pub epsilon: f64,
    #[arg(long, env = "MNS_CAP", default_value_t = 100_000_000)]
    pub cap: u64,
}

#[derive(Debug, Clone, Args)]
pub struct CommutationArgs {
    #[arg(long, env = "MNS_MODE_VALUES", value_delimiter = ',', default_value = "64,256,1024")]
    pub mode_values: Vec<usize>,
    /// Cut l; M/2 when unset.
    #[arg(long, env = "MNS_CUT")]
    pub cut: Option<usize>,
    #[arg(long, env = "MNS_PAIRS", default_value_t = 8)]
    pub pairs: usize,
    #[arg(long, env = "MNS_TRIALS", default_value_t = 200)]
    pub trials: usize,
}

#[derive(Clone, Debug)]
struct Point {
    n: usize,
    /// η, p, or nothing for explicit spectra.
    value: Option<f64>,
    depth: usize,
    theta_mode: String,
}

impl Point {
    fn label(&self) -> String {
        let v = self.value.map(|v| format!(" value={v}")).unwrap_or_default();
        format!("N={}{v} theta_mode={}", self.n, self.theta_mode)
    }

    fn prefix(&self, alpha: f64) -> String {
        let v = self.value.map(|v| v.to_string()).unwrap_or_default();
        format!("{},{v},{alpha},{}", self.n, self.theta_mode)
    }
}

fn theta_label(t: ThetaArg) -> &'static str {
    match t {
        ThetaArg::WorstCase => "worst-case",
        ThetaArg::Haar => "haar",
        ThetaArg::Ustc => "ustc",
    }
}

fn validate(g: &GridArgs) -> CliResult<()> {
    let bad = |m: String| Err(CliError::Invalid(m));
    if g.n_values.contains(&0) {
        return bad("N values must be positive".into());
    }
    if let Some(a) = g.alpha_values.iter().find(|a| !(**a > 0.0 && a.is_finite())) {
        return bad(format!("alpha = {a} must be positive and finite"));
    }
    match g.input {
        GridInput::Iqp => {
            if g.rates.is_empty() {
                return bad("--rates is required for IQP grids".into());
            }
            for &rate in &g.rates {
                NoiseSpec { model: g.noise.into(), rate, extra_noise_layer: g.extra_noise_layer }.validate()?;
            }
            if g.depths.contains(&0) {
                return bad("depths must be positive".into());
            }
        }
        GridInput::Spectrum => {
            SiteSpectrum::new(g.site_spectrum.clone())?;
        }
        _ => {
            if g.eta_values.is_empty() && g.eta_coefficients.is_empty() {
                return bad("--eta-values or --eta-coefficients is required".into());
            }
            if let Some(e) = g.eta_values.iter().find(|e| !(0.0..=1.0).contains(*e)) {
                return bad(format!("eta = {e} is outside [0, 1]"));
            }
            if let Some(c) = g.eta_coefficients.iter().find(|c| !(**c >= 0.0 && c.is_finite())) {
                return bad(format!("coefficient {c} must be nonnegative"));
            }
        }
    }
    Ok(())
}

fn points(g: &GridArgs) -> Vec<Point> {
    let mut out = Vec::new();
    for &n in &g.n_values {
        match g.input {
            GridInput::Iqp => {
                for &rate in &g.rates {
                    for &depth in &g.depths {
                        out.push(Point { n, value: Some(rate), depth, theta_mode: format!("depth-{depth}") });
                    }
                }
            }
            GridInput::Spectrum => out.push(Point { n, value: None, depth: 0, theta_mode: "explicit".into() }),
            _ => {
                let scale = match g.eta_scaling {
                    EtaScaling::InverseSqrt => (n as f64).sqrt(),
                    EtaScaling::InverseCbrt => (n as f64).cbrt(),
                };
                let etas = g.eta_values.iter().copied().chain(g.eta_coefficients.iter().map(|c| c / scale));
                out.extend(etas.map(|eta| Point {
                    n,
                    value: Some(eta),
                    depth: 0,
                    theta_mode: theta_label(g.theta).into(),
                }));
            }
        }
    }
    out
}

fn photonic_kind(g: &GridArgs) -> InputKind {
    match g.input {
        GridInput::Fock => InputKind::Fock { n: g.fock_n },
        GridInput::Cat => InputKind::Cat { parity: g.parity.into(), gamma: g.gamma, cutoff: None },
        _ => InputKind::SinglePhoton,
    }
}

fn theta_rows(g: &GridArgs, n: usize, seed: u64) -> Result<(ThetaProfile, usize)> {
    match g.theta {
        ThetaArg::WorstCase => Ok((ThetaProfile::WorstCase, g.modes.unwrap_or(n * n))),
        ThetaArg::Haar => {
            let m = g.modes.unwrap_or(n * n);
            if m.saturating_mul(n) > HAAR_MAX_ENTRIES {
                return Err(MnsError::ResourceLimit(format!("Haar rows for N = {n} on {m} modes")));
            }
            let rows = haar_rows(m, n, seed)?;
            Ok((ThetaProfile::Explicit(theta_profile(&rows, m / 2)?), m))
        }
        ThetaArg::Ustc => {
            let (circuit, inputs) = ustc_like_gatelist(n, seed)?;
            let m = circuit.mode_count();
            let t = circuit.transfer_matrix();
            let rows = ComplexMatrix::from_fn(n, m, |r, c| t[(inputs[r], c)]);
            Ok((ThetaProfile::Explicit(theta_profile(&rows, m / 2)?), m))
        }
    }
}

/// Site spectra of a point, with the register size (modes, local dim)
/// used for the memory column.
fn point_spectra(g: &GridArgs, p: &Point, seed: u64) -> Result<(Vec<SiteSpectrum>, usize, usize)> {
    match g.input {
        GridInput::Iqp => {
            let noise = NoiseSpec { model: g.noise.into(), rate: p.value.unwrap_or(0.0), extra_noise_layer: g.extra_noise_layer };
            let (q0, q1) = phi_amplitudes(noise.folded_rate(p.depth)?)?;
            let s = SiteSpectrum::new(vec![q0 * q0, q1 * q1])?;
            Ok((vec![s; p.n / 2], p.n, 2))
        }
        GridInput::Spectrum => {
            let s = SiteSpectrum::new(g.site_spectrum.clone())?;
            let d = g.site_spectrum.len();
            Ok((vec![s; p.n], p.n, d))
        }
        _ => {
            let eta = p.value.unwrap_or(1.0);
            let (profile, m) = theta_rows(g, p.n, seed)?;
            let kind = photonic_kind(g);
            let d = LossyInputSpec::new(kind, m.max(p.n), p.n, eta).local_dim();
            let spectra = match kind {
                InputKind::Fock { n } => fock_spectra(p.n, n, eta, &profile)?,
                InputKind::Cat { parity, gamma, .. } => cat_spectra(p.n, gamma, parity, eta, &profile)?,
                InputKind::SinglePhoton => single_photon_spectra(p.n, eta, &profile)?,
            };
            Ok((spectra, m, d))
        }
    }
}

/// `e^{ln_v}` as a plain number, or in scientific form past f64 range.
fn from_ln(ln_v: f64) -> String {
    let v = ln_v.exp();
    if v.is_finite() {
        return v.to_string();
    }
    let l10 = ln_v / LN_10;
    let mut e = l10.floor();
    let mut mantissa = (10f64.powf(l10 - e) * 1e6).round() / 1e6;
    if mantissa >= 10.0 {
        mantissa /= 10.0;
        e += 1.0;
    }
    format!("{mantissa:.6}e{}", e as i64)
}

fn finite(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(MnsError::Numerical(format!("{name} is not finite")))
    }
}

fn run_grid<F>(g: &GridArgs, row: F) -> CliResult<Emit>
where
    F: Fn(&Point) -> Result<Vec<String>> + Sync,
{
    validate(g)?;
    let pts = points(g);
    let results: Vec<Result<Vec<String>>> = pts.par_iter().map(&row).collect();
    let mut emit = Emit::new();
    let mut body = format!("{GRID_HEADER}\n");
    for (p, r) in pts.iter().zip(results) {
        match r {
            Ok(lines) => lines.iter().for_each(|l| {
                let _ = writeln!(body, "{l}");
            }),
            Err(e) => emit.failures.push(format!("{}: {e}", p.label())),
        }
    }
    emit.body = body.into_bytes();
    Ok(emit)
}

pub fn ere_sweep(a: &SweepArgs, seed: u64) -> CliResult<Emit> {
    let g = &a.grid;
    run_grid(g, |p| {
        let (spectra, m, d) = point_spectra(g, p, seed)?;
        g.alpha_values
            .iter()
            .map(|&alpha| {
                let s = match g.input {
                    GridInput::Iqp => {
                        let noise = NoiseSpec { model: g.noise.into(), rate: p.value.unwrap_or(0.0), extra_noise_layer: g.extra_noise_layer };
                        iqp_ere_bound(p.n, noise.folded_rate(p.depth)?, alpha)?
                    }
                    _ => ere_from_spectra(&spectra, alpha)?,
                };
                let s = finite("entropy", s)?;
                // Schmidt rank r obeys S_α ≤ ln r, so e^S bounds χ from below
                let (chi, memory) = if s < 43.0 {
                    let chi = (s.exp() * (1.0 - 1e-12)).ceil().max(1.0) as u64;
                    (chi.to_string(), memory_estimate(chi, m, d).to_string())
                } else {
                    let ln_mem = 8f64.ln() + 2.0 * s + (m as f64).ln() + (d as f64).ln();
                    (from_ln(s), from_ln(ln_mem))
                };
                Ok(format!("{},{chi},{memory},{s}", p.prefix(alpha)))
            })
            .collect()
    })
}

pub fn bond_dim(a: &BondArgs, seed: u64) -> CliResult<Emit> {
    if !(a.epsilon > 0.0 && a.epsilon < 1.0) {
        return Err(CliError::Invalid(format!("epsilon = {} is outside (0, 1)", a.epsilon)));
    }
    let g = &a.grid;
    run_grid(g, |p| {
        let (spectra, m, d) = point_spectra(g, p, seed)?;
        let r = required_bond_dimension(&spectra, a.epsilon, a.cap)?;
        let memory = memory_estimate(r.chi_required, m, d);
        g.alpha_values
            .iter()
            .map(|&alpha| {
                let s = finite("entropy", ere_from_spectra(&spectra, alpha)?)?;
                Ok(format!("{},{},{memory},{s}", p.prefix(alpha), r.chi_required))
            })
            .collect()
    })
}

pub fn commutation_check(a: &CommutationArgs, seed: u64) -> CliResult<Emit> {
    if a.mode_values.is_empty() {
        return Err(CliError::Invalid("--mode-values is empty".into()));
    }
    let rows: Vec<_> = a
        .mode_values
        .par_iter()
        .map(|&m| {
            let l = a.cut.unwrap_or(m / 2);
            commutation_statistics(m, l, a.pairs, a.trials, seed).map(|s| (m, l, s))
        })
        .collect::<Result<_>>()?;
    let mut body = String::from("M,l,pairs,trials,mean_abs,stderr\n");
    for (m, l, s) in rows {
        let _ = writeln!(body, "{m},{l},{},{},{},{}", a.pairs, a.trials, s.mean_abs, s.stderr);
    }
    let mut emit = Emit::new();
    emit.body = body.into_bytes();
    Ok(emit)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scientific_past_range() {
        assert_eq!(from_ln(0.0), "1");
        assert_eq!(from_ln(1000.0 * LN_10), "1.000000e1000");
    }
}
