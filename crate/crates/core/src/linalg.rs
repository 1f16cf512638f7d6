//! Dense complex linear algebra: matrices, Haar sampling, QR/SVD and the
//! Ryser permanent.

use std::ops::{Index, IndexMut};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{MnsError, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Largest matrix the permanent accepts.
pub const PERMANENT_MAX_DIM: usize = 20;

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(MnsError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, dim, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds from nested rows; all rows must share one length.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(MnsError::Shape("ragged rows".into()));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        })
    }

    pub fn from_real(rows: usize, cols: usize, values: &[f64]) -> Result<Self> {
        Self::new(rows, cols, values.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * c).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(MnsError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        Self::from_fn(self.rows * other.rows, self.cols * other.cols, |i, j| {
            self[(i / other.rows, j / other.cols)] * other[(i % other.rows, j % other.cols)]
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// max |A − B| entrywise.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// max |U†U − I|.
    pub fn unitarity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.cols;
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                let mut s = ZERO;
                for i in 0..self.rows {
                    s += self[(i, a)].conj() * self[(i, b)];
                }
                if a == b {
                    s -= ONE;
                }
                worst = worst.max(s.norm());
            }
        }
        worst
    }

    pub fn ensure_unitary(&self, tol: f64) -> Result<()> {
        let dev = self.unitarity_deviation();
        if dev <= tol {
            Ok(())
        } else {
            Err(MnsError::NotUnitary(dev))
        }
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub(crate) fn from_nalgebra(m: &DMatrix<C64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Complex standard normal with E|z|² = 1.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Haar-random unitary from a seed.
pub fn haar_unitary(dim: usize, seed: u64) -> Result<ComplexMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    haar_unitary_with(dim, &mut rng)
}

/// Haar-random unitary drawn from an existing generator.
pub fn haar_unitary_with<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<ComplexMatrix> {
    haar_isometry_with(dim, dim, rng)
}

/// First `cols` columns of the Haar unitary `haar_unitary(dim, seed)`.
///
/// Gaussians are drawn column by column, so the leading columns use the same
/// draws as the full matrix and cost only O(dim·cols²).
pub fn haar_isometry(dim: usize, cols: usize, seed: u64) -> Result<ComplexMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    haar_isometry_with(dim, cols, &mut rng)
}

pub fn haar_isometry_with<R: Rng + ?Sized>(
    dim: usize,
    cols: usize,
    rng: &mut R,
) -> Result<ComplexMatrix> {
    if dim == 0 {
        return Err(MnsError::InvalidDimension("Haar unitary of dimension 0".into()));
    }
    if cols == 0 || cols > dim {
        return Err(MnsError::InvalidDimension(format!(
            "{cols} columns of a {dim}-dimensional unitary"
        )));
    }
    let mut g = ComplexMatrix::zeros(dim, cols);
    for j in 0..cols {
        for i in 0..dim {
            g[(i, j)] = complex_gaussian(rng);
        }
    }
    let (q, _) = qr(&g)?;
    Ok(q)
}

/// Thin QR with the diagonal of R made real and nonnegative.
pub fn qr(a: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if a.rows == 0 || a.cols == 0 {
        return Err(MnsError::Shape("QR of an empty matrix".into()));
    }
    let dec = a.to_nalgebra().qr();
    let mut q = ComplexMatrix::from_nalgebra(&dec.q());
    let mut r = ComplexMatrix::from_nalgebra(&dec.r());
    for k in 0..r.rows.min(r.cols) {
        let d = r[(k, k)];
        let n = d.norm();
        if n == 0.0 {
            continue;
        }
        let phase = d / n;
        for i in 0..q.rows {
            q[(i, k)] *= phase;
        }
        for j in 0..r.cols {
            r[(k, j)] *= phase.conj();
        }
    }
    Ok((q, r))
}

/// A = U·diag(s)·V†.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub v: ComplexMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let k = self.singular_values.len();
        let us = ComplexMatrix::from_fn(self.u.rows, k, |i, j| {
            self.u[(i, j)] * self.singular_values[j]
        });
        us.matmul(&self.v.adjoint()).expect("consistent svd shapes")
    }
}

/// Thin SVD with singular values sorted descending.
pub fn svd(a: &ComplexMatrix) -> Result<Svd> {
    if a.rows == 0 || a.cols == 0 {
        return Err(MnsError::Shape("SVD of an empty matrix".into()));
    }
    let (u, s, vt) = svd_raw(a.to_nalgebra())?;
    Ok(Svd {
        u: ComplexMatrix::from_nalgebra(&u),
        singular_values: s,
        v: ComplexMatrix::from_nalgebra(&vt.adjoint()),
    })
}

/// SVD on a nalgebra matrix: returns (U, s, V†) sorted descending.
pub(crate) fn svd_raw(m: DMatrix<C64>) -> Result<(DMatrix<C64>, Vec<f64>, DMatrix<C64>)> {
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(MnsError::Numerical("non-finite entry in SVD input".into()));
    }
    // nalgebra's complex SVD loses accuracy on rank-deficient blocks, which
    // are the norm after a two-site gate; faer's is reliable there.
    let (rows, cols) = m.shape();
    let fm = faer::Mat::<C64>::from_fn(rows, cols, |i, j| m[(i, j)]);
    let dec = fm
        .thin_svd()
        .map_err(|e| MnsError::Numerical(format!("SVD did not converge: {e:?}")))?;
    let sv = dec.S().column_vector();
    let s: Vec<f64> = (0..sv.nrows()).map(|i| sv[i].re).collect();
    let (fu, fv) = (dec.U(), dec.V());

    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&a, &b| s[b].total_cmp(&s[a]));
    let u = DMatrix::from_fn(rows, order.len(), |i, j| fu[(i, order[j])]);
    let vt = DMatrix::from_fn(order.len(), cols, |i, j| fv[(j, order[i])].conj());
    let s = order.iter().map(|&o| s[o]).collect();
    Ok((u, s, vt))
}

/// Permanent by Ryser's formula with Gray-code updates, O(2ⁿ·n).
pub fn permanent(a: &ComplexMatrix) -> Result<C64> {
    if !a.is_square() {
        return Err(MnsError::Shape(format!(
            "permanent of a {}x{} matrix",
            a.rows, a.cols
        )));
    }
    let n = a.rows;
    if n > PERMANENT_MAX_DIM {
        return Err(MnsError::ResourceLimit(format!(
            "permanent dimension {n} exceeds {PERMANENT_MAX_DIM}"
        )));
    }
    if n == 0 {
        return Ok(ONE);
    }
    // Row sums over the current column subset.
    let mut row_sums = vec![ZERO; n];
    let mut total = ZERO;
    let mut gray: u64 = 0;
    for k in 1u64..(1 << n) {
        let next = k ^ (k >> 1);
        let flipped = (next ^ gray).trailing_zeros() as usize;
        let adding = next & (1 << flipped) != 0;
        for (i, s) in row_sums.iter_mut().enumerate() {
            if adding {
                *s += a[(i, flipped)];
            } else {
                *s -= a[(i, flipped)];
            }
        }
        gray = next;
        let prod = row_sums.iter().fold(ONE, |acc, &s| acc * s);
        if next.count_ones() % 2 == 0 {
            total += prod;
        } else {
            total -= prod;
        }
    }
    if n % 2 == 1 {
        total = -total;
    }
    Ok(total)
}
