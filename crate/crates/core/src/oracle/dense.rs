//! Dense pure and mixed states over a register of qudits.

use crate::error::{MnsError, Result};
use crate::linalg::{ComplexMatrix, C64, ONE, ZERO};
use crate::mps::Gate;

/// Largest Hilbert space a dense pure state may span.
pub const DENSE_MAX_DIM: usize = 1 << 20;
/// Largest Hilbert space a density matrix may span.
pub const DENSITY_MAX_DIM: usize = 1 << 12;

fn total_dim(dims: &[usize], limit: usize) -> Result<usize> {
    dims.iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .filter(|&n| n <= limit && n > 0)
        .ok_or_else(|| {
            MnsError::ResourceLimit(format!("dense dimension of {dims:?} exceeds {limit}"))
        })
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Applies `gate` in place to a vector laid out by `dims`.
fn apply_to_vector(dims: &[usize], strides: &[usize], gate: &Gate, v: &mut [C64]) {
    match gate {
        Gate::Diagonal { sites, phases } => {
            for (idx, x) in v.iter_mut().enumerate() {
                let joint = sites
                    .iter()
                    .fold(0, |acc, &s| acc * dims[s] + (idx / strides[s]) % dims[s]);
                *x *= phases[joint];
            }
        }
        Gate::Single { site, matrix } => {
            let (d, st) = (dims[*site], strides[*site]);
            let mut buf = vec![ZERO; d];
            for base in 0..v.len() {
                if (base / st) % d != 0 {
                    continue;
                }
                for (s, b) in buf.iter_mut().enumerate() {
                    *b = v[base + s * st];
                }
                for s in 0..d {
                    v[base + s * st] = matrix.row(s).iter().zip(&buf).map(|(g, x)| g * x).sum();
                }
            }
        }
        Gate::Two { sites: (a, b), matrix } => {
            let (da, db) = (dims[*a], dims[*b]);
            let (sa, sb) = (strides[*a], strides[*b]);
            let mut buf = vec![ZERO; da * db];
            for base in 0..v.len() {
                if (base / sa) % da != 0 || (base / sb) % db != 0 {
                    continue;
                }
                for i in 0..da {
                    for j in 0..db {
                        buf[i * db + j] = v[base + i * sa + j * sb];
                    }
                }
                for i in 0..da {
                    for j in 0..db {
                        v[base + i * sa + j * sb] = matrix
                            .row(i * db + j)
                            .iter()
                            .zip(&buf)
                            .map(|(g, x)| g * x)
                            .sum();
                    }
                }
            }
        }
    }
}

/// Dense pure state; site 0 is the most significant digit.
#[derive(Clone, Debug)]
pub struct DenseState {
    dims: Vec<usize>,
    strides: Vec<usize>,
    amps: Vec<C64>,
}

impl DenseState {
    pub fn product(local_states: &[Vec<C64>]) -> Result<Self> {
        let dims: Vec<usize> = local_states.iter().map(Vec::len).collect();
        total_dim(&dims, DENSE_MAX_DIM)?;
        let mut amps = vec![ONE];
        for v in local_states {
            amps = amps
                .iter()
                .flat_map(|&a| v.iter().map(move |&b| a * b))
                .collect();
        }
        Ok(Self {
            strides: strides(&dims),
            dims,
            amps,
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        gate.check_against(&self.dims)?;
        apply_to_vector(&self.dims, &self.strides, gate, &mut self.amps);
        Ok(())
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Eigenvalues of the reduced state of sites `0..cut`, descending.
    pub fn cut_spectrum(&self, cut: usize) -> Vec<f64> {
        let left: usize = self.dims[..cut].iter().product();
        let right = self.amps.len() / left;
        let psi = ComplexMatrix::new(left, right, self.amps.clone()).expect("consistent shape");
        let rho = psi.matmul(&psi.adjoint()).expect("consistent shape");
        hermitian_eigenvalues(&rho)
    }
}

/// Dense density matrix.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    strides: Vec<usize>,
    dim: usize,
    data: Vec<C64>,
}

impl DensityMatrix {
    /// `⊗_k rho_k`.
    pub fn product(locals: &[ComplexMatrix]) -> Result<Self> {
        let dims: Vec<usize> = locals.iter().map(ComplexMatrix::rows).collect();
        if locals.iter().any(|m| !m.is_square()) {
            return Err(MnsError::Shape("local density matrices must be square".into()));
        }
        let dim = total_dim(&dims, DENSITY_MAX_DIM)?;
        let rho = locals
            .iter()
            .fold(ComplexMatrix::identity(1), |acc, m| acc.kron(m));
        Ok(Self {
            strides: strides(&dims),
            dims,
            dim,
            data: rho.into_vec(),
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim + j]
    }

    pub fn as_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::new(self.dim, self.dim, self.data.clone()).expect("square")
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.entry(i, i)).sum()
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in 0..=i {
                worst = worst.max((self.entry(i, j) - self.entry(j, i).conj()).norm());
            }
        }
        worst
    }

    /// ρ → GρG†.
    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        gate.check_against(&self.dims)?;
        let n = self.dim;
        let mut col = vec![ZERO; n];
        // G ρ, column by column
        for j in 0..n {
            for (i, c) in col.iter_mut().enumerate() {
                *c = self.data[i * n + j];
            }
            apply_to_vector(&self.dims, &self.strides, gate, &mut col);
            for (i, &c) in col.iter().enumerate() {
                self.data[i * n + j] = c;
            }
        }
        // (G (Gρ)†)† = Gρ G†, row by row of conj
        for i in 0..n {
            let row = &mut self.data[i * n..(i + 1) * n];
            row.iter_mut().for_each(|z| *z = z.conj());
            apply_to_vector(&self.dims, &self.strides, gate, row);
            row.iter_mut().for_each(|z| *z = z.conj());
        }
        Ok(())
    }

    /// Multiplies ρ_ab by `f(a, b)` elementwise.
    pub fn map_entries(&mut self, mut f: impl FnMut(usize, usize, C64) -> C64) {
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                let z = &mut self.data[i * n + j];
                *z = f(i, j, *z);
            }
        }
    }

    /// Computational-basis probabilities.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.entry(i, i).re).collect()
    }

    pub(crate) fn data_mut(&mut self) -> &mut [C64] {
        &mut self.data
    }
}

/// Eigenvalues of a Hermitian matrix, descending, by cyclic Jacobi on the
/// real symmetric embedding `[[Re, −Im], [Im, Re]]` (each eigenvalue appears
/// twice there; one copy of each pair is returned).
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Vec<f64> {
    let n = h.rows();
    let m = 2 * n;
    let mut a = vec![0.0f64; m * m];
    for i in 0..n {
        for j in 0..n {
            let z = h[(i, j)];
            a[i * m + j] = z.re;
            a[(i + n) * m + j + n] = z.re;
            a[i * m + j + n] = -z.im;
            a[(i + n) * m + j] = z.im;
        }
    }
    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let off: f64 = (0..m)
            .flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * m + j] * a[i * m + j])
            .sum();
        if off <= 1e-30 * scale {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                let apq = a[p * m + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * m + q] - a[p * m + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..m {
                    let akp = a[k * m + p];
                    let akq = a[k * m + q];
                    a[k * m + p] = c * akp - s * akq;
                    a[k * m + q] = s * akp + c * akq;
                }
                for k in 0..m {
                    let apk = a[p * m + k];
                    let aqk = a[q * m + k];
                    a[p * m + k] = c * apk - s * aqk;
                    a[q * m + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..m).map(|i| a[i * m + i]).collect();
    ev.sort_by(|x, y| y.total_cmp(x));
    ev.into_iter().step_by(2).collect()
}
