//! Linear-optical circuits at the mode level and their Fock-space lift.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{MnsError, Result};
use crate::linalg::{haar_unitary_with, ComplexMatrix, C64, ONE};
use crate::mps::{Gate, GateList};

/// Tolerance for mode unitaries and transfer matrices.
pub const MODE_UNITARY_TOL: f64 = 1e-10;

/// A 2×2 mode unitary `u` on modes (p, q): `a†_p → u00 a†_p + u01 a†_q`,
/// `a†_q → u10 a†_p + u11 a†_q`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeGate {
    pub modes: (usize, usize),
    pub u: ComplexMatrix,
}

/// Ordered list of two-mode elements on `mode_count` modes.
#[derive(Clone, Debug, PartialEq)]
pub struct Interferometer {
    mode_count: usize,
    elements: Vec<ModeGate>,
}

impl Interferometer {
    pub fn new(mode_count: usize, elements: Vec<ModeGate>) -> Result<Self> {
        for e in &elements {
            let (p, q) = e.modes;
            if p >= mode_count || q >= mode_count || p == q {
                return Err(MnsError::InvalidParameter(format!(
                    "element on modes ({p}, {q}) of {mode_count}"
                )));
            }
            if e.u.rows() != 2 || e.u.cols() != 2 {
                return Err(MnsError::Shape("mode element must be 2x2".into()));
            }
            e.u.ensure_unitary(MODE_UNITARY_TOL)?;
        }
        Ok(Self { mode_count, elements })
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn elements(&self) -> &[ModeGate] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Single-photon transfer matrix; row = input mode, column = output mode.
    pub fn transfer_matrix(&self) -> ComplexMatrix {
        let mut t = ComplexMatrix::identity(self.mode_count);
        for e in &self.elements {
            let (p, q) = e.modes;
            for j in 0..self.mode_count {
                let (xp, xq) = (t[(j, p)], t[(j, q)]);
                t[(j, p)] = xp * e.u[(0, 0)] + xq * e.u[(1, 0)];
                t[(j, q)] = xp * e.u[(0, 1)] + xq * e.u[(1, 1)];
            }
        }
        t
    }

    /// Two-site Fock-space gates for local dimension `d`.
    pub fn lift(&self, d: usize) -> Result<GateList> {
        if d == 0 {
            return Err(MnsError::InvalidDimension("local dimension 0".into()));
        }
        let gates = self
            .elements
            .iter()
            .map(|e| Gate::Two {
                sites: e.modes,
                matrix: lift_mode_unitary(&e.u, d),
            })
            .collect();
        Ok(GateList::from_trusted(gates))
    }
}

/// Fock-space action of a two-mode unitary on `|a, b⟩`, a, b < d, with
/// basis index `a·d + b`. Blocks with a + b ≥ d cannot be represented in
/// the truncated ladder and are left as identity.
pub fn lift_mode_unitary(u: &ComplexMatrix, d: usize) -> ComplexMatrix {
    let ln_fact: Vec<f64> = (0..2 * d)
        .scan(0.0, |acc, k| {
            if k > 0 {
                *acc += (k as f64).ln();
            }
            Some(*acc)
        })
        .collect();
    let binom = |n: usize, k: usize| (ln_fact[n] - ln_fact[k] - ln_fact[n - k]).exp();
    let pow = |z: C64, e: usize| (0..e).fold(ONE, |acc, _| acc * z);
    let (u00, u01, u10, u11) = (u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]);

    let mut g = ComplexMatrix::zeros(d * d, d * d);
    for a in 0..d {
        for b in 0..d {
            let col = a * d + b;
            let n = a + b;
            if n >= d {
                g[(col, col)] = ONE;
                continue;
            }
            // (u00 x + u01 y)^a (u10 x + u11 y)^b, x^i y^j → √(i! j!) |i, j⟩
            for r in 0..=a {
                let left = pow(u00, r) * pow(u01, a - r) * binom(a, r);
                for t in 0..=b {
                    let right = pow(u10, t) * pow(u11, b - t) * binom(b, t);
                    let i = r + t;
                    let j = n - i;
                    let norm = (0.5 * (ln_fact[i] + ln_fact[j] - ln_fact[a] - ln_fact[b])).exp();
                    g[(i * d + j, col)] += left * right * norm;
                }
            }
        }
    }
    g
}

/// Balanced splitter `(1/√2)[[1, −1], [1, 1]]`.
pub fn balanced_splitter() -> ComplexMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_real(2, 2, &[h, -h, h, h]).expect("2x2")
}

/// Splitters pairing mode i with i + M/2 for i < N.
pub fn worst_case_gatelist(m: usize, n: usize) -> Result<Interferometer> {
    if m % 2 == 1 {
        return Err(MnsError::Parity(m));
    }
    if n > m / 2 {
        return Err(MnsError::InvalidParameter(format!(
            "worst-case circuit needs N <= M/2, got N = {n}, M = {m}"
        )));
    }
    let elements = (0..n)
        .map(|i| ModeGate {
            modes: (i, i + m / 2),
            u: balanced_splitter(),
        })
        .collect();
    Interferometer::new(m, elements)
}

fn brick_layers<R: Rng + ?Sized>(
    offset: usize,
    size: usize,
    depth: usize,
    rng: &mut R,
    out: &mut Vec<ModeGate>,
) -> Result<()> {
    for layer in 0..depth {
        let mut p = layer % 2;
        while p + 1 < size {
            out.push(ModeGate {
                modes: (offset + p, offset + p + 1),
                u: haar_unitary_with(2, rng)?,
            });
            p += 2;
        }
    }
    Ok(())
}

/// Alternating even/odd layers of Haar 2×2 elements on adjacent modes.
pub fn brickwall_gatelist(m: usize, depth: usize, seed: u64) -> Result<Interferometer> {
    if depth == 0 {
        return Err(MnsError::InvalidParameter("brick-wall depth must be >= 1".into()));
    }
    if m < 2 {
        return Err(MnsError::InvalidParameter(format!(
            "brick-wall needs at least 2 modes, got {m}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut elements = Vec::new();
    brick_layers(0, m, depth, &mut rng, &mut elements)?;
    Interferometer::new(m, elements)
}

/// Default brick-wall depth for Haar-like circuits.
pub fn default_brickwall_depth(m: usize) -> usize {
    4 * m
}

/// Nearest integer to N/√2.
pub fn ustc_half_width(n: usize) -> usize {
    (n as f64 / std::f64::consts::SQRT_2).round() as usize
}

/// Two independent half-size brick-walls on M = 2k² modes joined by one
/// brick layer through the middle; photons sit in the middle of each half.
pub fn ustc_like_gatelist(n: usize, seed: u64) -> Result<(Interferometer, Vec<usize>)> {
    if n < 2 {
        return Err(MnsError::InvalidParameter(format!(
            "USTC-like circuit needs N >= 2, got {n}"
        )));
    }
    let k = ustc_half_width(n).max(1);
    let half = k * k;
    let m = 2 * half;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut elements = Vec::new();
    brick_layers(0, half, half, &mut rng, &mut elements)?;
    brick_layers(half, half, half, &mut rng, &mut elements)?;
    // coupling layer containing the pair (half − 1, half)
    let mut p = (half - 1) % 2;
    while p + 1 < m {
        elements.push(ModeGate {
            modes: (p, p + 1),
            u: haar_unitary_with(2, &mut rng)?,
        });
        p += 2;
    }
    let first = n.div_ceil(2);
    let second = n / 2;
    if first > half {
        return Err(MnsError::InvalidParameter(format!(
            "{first} photons do not fit in {half} modes"
        )));
    }
    let place = |offset: usize, count: usize| {
        let start = offset + (half - count) / 2;
        start..start + count
    };
    let inputs = place(0, first).chain(place(half, second)).collect();
    Ok((Interferometer::new(m, elements)?, inputs))
}

/// θ_j = arccos √(Σ_{k<l} |U_jk|²) for each row; `u` needs orthonormal
/// rows (any unitary, or leading rows of one).
pub fn theta_profile(u: &ComplexMatrix, cut: usize) -> Result<Vec<f64>> {
    let m = u.cols();
    if cut == 0 || cut >= m {
        return Err(MnsError::InvalidParameter(format!(
            "cut {cut} must satisfy 1 <= l < {m}"
        )));
    }
    let gram = u.matmul(&u.adjoint())?;
    let dev = gram.max_abs_diff(&ComplexMatrix::identity(u.rows()));
    if dev > MODE_UNITARY_TOL {
        return Err(MnsError::NotUnitary(dev));
    }
    Ok((0..u.rows())
        .map(|j| {
            let c2: f64 = u.row(j)[..cut].iter().map(|z| z.norm_sqr()).sum();
            c2.clamp(0.0, 1.0).sqrt().acos()
        })
        .collect())
}

/// Leading `rows` rows of a Haar unitary on `m` modes.
pub fn haar_rows(m: usize, rows: usize, seed: u64) -> Result<ComplexMatrix> {
    Ok(crate::linalg::haar_isometry(m, rows, seed)?.transpose())
}

/// `e^{iπn̂}` on one mode: the sign flip taking ψ₊ to ψ₋.
pub fn parity_phase(d: usize) -> Vec<C64> {
    (0..d).map(|n| if n % 2 == 0 { ONE } else { -ONE }).collect()
}
