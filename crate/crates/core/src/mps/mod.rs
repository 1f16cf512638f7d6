//! Matrix-product states with a moving orthogonality center.
//!
//! Tensors left of the center are left-isometric, tensors right of it
//! right-isometric, and the center tensor has unit norm; the overall scale
//! lives in `norm_sq`. Every two-site update first moves the center onto the
//! pair, so the SVD of the updated block is the Schmidt decomposition of the
//! whole state and the squared weight it drops is exactly the norm lost.
//! Each bond keeps the Schmidt vector λ from its latest decomposition; the
//! Vidal tensors Γ are produced on demand by [`MpsState::vidal`].
//!
//! Truncation keeps at most `chi_max` values and drops anything below
//! [`SCHMIDT_FLOOR`]. λ is renormalized after every cut; the squared weight
//! removed is recorded per bond, on the scale of the un-renormalized state,
//! so that `1 − |ψ|²` of [`MpsState::to_statevector`] equals the total
//! discarded weight.

mod gate;
mod sample;
mod snapshot;

use nalgebra::DMatrix;

use crate::error::{MnsError, Result};
use crate::linalg::{svd_raw, ComplexMatrix, C64, ONE, ZERO};

pub use gate::{Gate, GateList};
pub use sample::Sampler;

/// Schmidt values below this are dropped.
pub const SCHMIDT_FLOOR: f64 = 1e-14;

/// Largest dense vector `to_statevector` builds.
pub const STATEVECTOR_MAX_DIM: usize = 1 << 20;

/// Tolerance for normalized local input vectors.
pub const LOCAL_NORM_TOL: f64 = 1e-12;

/// Rank-3 tensor, row-major in (left, phys, right).
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor3 {
    pub left: usize,
    pub phys: usize,
    pub right: usize,
    pub data: Vec<C64>,
}

impl Tensor3 {
    #[inline]
    pub fn at(&self, a: usize, s: usize, b: usize) -> C64 {
        self.data[(a * self.phys + s) * self.right + b]
    }

    #[inline]
    fn at_mut(&mut self, a: usize, s: usize, b: usize) -> &mut C64 {
        &mut self.data[(a * self.phys + s) * self.right + b]
    }

    /// Matrix view with rows (left, phys) and columns right.
    fn as_left_matrix(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.left * self.phys, self.right, &self.data)
    }

    /// Matrix view with rows left and columns (phys, right).
    fn as_right_matrix(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.left, self.phys * self.right, &self.data)
    }

    fn from_matrix(left: usize, phys: usize, right: usize, m: &DMatrix<C64>) -> Self {
        debug_assert_eq!(m.nrows() * m.ncols(), left * phys * right);
        let cols = m.ncols();
        let data = (0..m.nrows() * cols).map(|k| m[(k / cols, k % cols)]).collect();
        Self { left, phys, right, data }
    }
}

/// Truncated SVD factors: `U_k`, renormalized λ, `V_k†`.
struct Split {
    u: DMatrix<C64>,
    lambda: Vec<f64>,
    vt: DMatrix<C64>,
}

/// Pure state of `L` sites in mixed-canonical form.
#[derive(Clone, Debug)]
pub struct MpsState {
    phys_dims: Vec<usize>,
    tensors: Vec<Tensor3>,
    lambdas: Vec<Vec<f64>>,
    center: usize,
    chi_max: Option<usize>,
    discarded: Vec<f64>,
    norm_sq: f64,
}

impl MpsState {
    /// Product state `⊗_k local_states[k]`. `chi_max = None` means unbounded.
    pub fn product(local_states: &[Vec<C64>], chi_max: Option<usize>) -> Result<Self> {
        if local_states.is_empty() {
            return Err(MnsError::InvalidDimension("MPS needs at least one site".into()));
        }
        if chi_max == Some(0) {
            return Err(MnsError::InvalidParameter("chi_max must be at least 1".into()));
        }
        let mut tensors = Vec::with_capacity(local_states.len());
        for (index, v) in local_states.iter().enumerate() {
            if v.is_empty() {
                return Err(MnsError::InvalidDimension(format!(
                    "site {index} has local dimension 0"
                )));
            }
            let norm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            if (norm_sq - 1.0).abs() > LOCAL_NORM_TOL {
                return Err(MnsError::Normalization { index, norm_sq });
            }
            tensors.push(Tensor3 {
                left: 1,
                phys: v.len(),
                right: 1,
                data: v.clone(),
            });
        }
        let bonds = local_states.len() - 1;
        Ok(Self {
            phys_dims: local_states.iter().map(Vec::len).collect(),
            tensors,
            lambdas: vec![vec![1.0]; bonds],
            center: 0,
            chi_max,
            discarded: vec![0.0; bonds],
            norm_sq: 1.0,
        })
    }

    /// Rebuilds a state from Vidal tensors; the center lands on site 0.
    pub(crate) fn from_vidal(
        gammas: Vec<Tensor3>,
        lambdas: Vec<Vec<f64>>,
        chi_max: Option<usize>,
        discarded: Vec<f64>,
        norm_sq: f64,
    ) -> Self {
        let tensors: Vec<Tensor3> = gammas
            .into_iter()
            .enumerate()
            .map(|(k, mut g)| {
                if let Some(lam) = lambdas.get(k) {
                    for (i, z) in g.data.iter_mut().enumerate() {
                        *z *= lam[i % g.right];
                    }
                }
                g
            })
            .collect();
        Self {
            phys_dims: tensors.iter().map(|t| t.phys).collect(),
            tensors,
            lambdas,
            center: 0,
            chi_max,
            discarded,
            norm_sq,
        }
    }

    pub fn site_count(&self) -> usize {
        self.phys_dims.len()
    }

    pub fn phys_dims(&self) -> &[usize] {
        &self.phys_dims
    }

    pub fn chi_max(&self) -> Option<usize> {
        self.chi_max
    }

    /// Schmidt values at bond `b` (between sites b and b+1).
    pub fn lambda(&self, bond: usize) -> &[f64] {
        &self.lambdas[bond]
    }

    pub fn lambdas(&self) -> &[Vec<f64>] {
        &self.lambdas
    }

    pub fn bond_dims(&self) -> Vec<usize> {
        self.lambdas.iter().map(Vec::len).collect()
    }

    pub fn max_bond_dim(&self) -> usize {
        self.lambdas.iter().map(Vec::len).max().unwrap_or(1)
    }

    /// Discarded squared weight per bond.
    pub fn discarded_per_bond(&self) -> &[f64] {
        &self.discarded
    }

    pub fn discarded_weight(&self) -> f64 {
        self.discarded.iter().sum()
    }

    /// Squared norm of the represented (truncated) state.
    pub fn norm_sq(&self) -> f64 {
        self.norm_sq
    }

    /// Site holding the orthogonality center.
    pub fn center(&self) -> usize {
        self.center
    }

    /// Site tensor in the current gauge.
    pub fn site_tensor(&self, site: usize) -> &Tensor3 {
        &self.tensors[site]
    }

    /// Vidal tensors Γ and freshly computed Schmidt vectors for every bond.
    pub fn vidal(&self) -> Result<(Vec<Tensor3>, Vec<Vec<f64>>)> {
        let mut s = self.clone();
        s.move_center(0)?;
        s.move_center(s.site_count() - 1)?;
        // every tensor is now left-isometric: A_k = λ_{k-1} Γ_k
        let gammas = s
            .tensors
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let mut g = a.clone();
                if k > 0 {
                    let lam = &s.lambdas[k - 1];
                    let block = g.phys * g.right;
                    for (i, z) in g.data.iter_mut().enumerate() {
                        *z /= lam[i / block];
                    }
                }
                g
            })
            .collect();
        Ok((gammas, s.lambdas))
    }

    /// Vidal tensor Γ of one site.
    pub fn gamma(&self, site: usize) -> Result<Tensor3> {
        Ok(self.vidal()?.0.swap_remove(site))
    }

    /// Applies one gate, routing nonadjacent pairs through swaps.
    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        gate.check_against(&self.phys_dims)?;
        match gate {
            Gate::Single { site, matrix } => {
                self.apply_single(*site, |v, out| {
                    for (i, o) in out.iter_mut().enumerate() {
                        *o = matrix.row(i).iter().zip(v).map(|(g, x)| g * x).sum();
                    }
                });
                Ok(())
            }
            Gate::Diagonal { sites, phases } if sites.len() == 1 => {
                self.apply_single(sites[0], |v, out| {
                    for ((o, x), p) in out.iter_mut().zip(v).zip(phases) {
                        *o = x * p;
                    }
                });
                Ok(())
            }
            Gate::Diagonal { sites, phases } => {
                let (a, b) = (sites[0], sites[1]);
                let matrix = ComplexMatrix::from_fn(phases.len(), phases.len(), |i, j| {
                    if i == j {
                        phases[i]
                    } else {
                        ZERO
                    }
                });
                self.apply_pair(a, b, &matrix)
            }
            Gate::Two { sites, matrix } => self.apply_pair(sites.0, sites.1, matrix),
        }
    }

    pub fn apply_gates(&mut self, gates: &GateList) -> Result<()> {
        gates.iter().try_for_each(|g| self.apply_gate(g))
    }

    // Unitary on one site: keeps every isometry condition, so no center move.
    fn apply_single(&mut self, site: usize, f: impl Fn(&[C64], &mut [C64])) {
        let t = &mut self.tensors[site];
        let (d, r) = (t.phys, t.right);
        let mut v = vec![ZERO; d];
        let mut out = vec![ZERO; d];
        for a in 0..t.left {
            for b in 0..r {
                for (s, x) in v.iter_mut().enumerate() {
                    *x = t.at(a, s, b);
                }
                f(&v, &mut out);
                for (s, &x) in out.iter().enumerate() {
                    *t.at_mut(a, s, b) = x;
                }
            }
        }
    }

    /// Two-site gate on arbitrary distinct sites; index order of `matrix` is
    /// `s_a·d_b + s_b`.
    fn apply_pair(&mut self, a: usize, b: usize, matrix: &ComplexMatrix) -> Result<()> {
        if a > b {
            let (da, db) = (self.phys_dims[a], self.phys_dims[b]);
            let permuted = ComplexMatrix::from_fn(da * db, da * db, |i, j| {
                let (tb, ta) = (i / da, i % da);
                let (sb, sa) = (j / da, j % da);
                matrix[(ta * db + tb, sa * db + sb)]
            });
            return self.apply_pair(b, a, &permuted);
        }
        for bond in (a + 1..b).rev() {
            self.swap_bond(bond, false)?;
        }
        self.apply_adjacent(a, matrix)?;
        for bond in a + 1..b {
            self.swap_bond(bond, true)?;
        }
        Ok(())
    }

    /// Two-site gate on sites (i, i+1).
    pub fn apply_adjacent(&mut self, i: usize, matrix: &ComplexMatrix) -> Result<()> {
        let (d1, d2) = (self.phys_dims[i], self.phys_dims[i + 1]);
        let dd = d1 * d2;
        if matrix.rows() != dd || matrix.cols() != dd {
            return Err(MnsError::Shape(format!(
                "{}x{} gate on sites of dimension {d1} and {d2}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        self.focus(i)?;
        let phi = self.contract_pair(i);
        let (l, r) = (self.tensors[i].left, self.tensors[i + 1].right);
        let mut out = DMatrix::<C64>::zeros(l * d1, d2 * r);
        let mut v = vec![ZERO; dd];
        for a in 0..l {
            for c in 0..r {
                for s in 0..d1 {
                    for t in 0..d2 {
                        v[s * d2 + t] = phi[(a * d1 + s, t * r + c)];
                    }
                }
                for s in 0..d1 {
                    for t in 0..d2 {
                        let row = matrix.row(s * d2 + t);
                        let x: C64 = row.iter().zip(&v).map(|(g, x)| g * x).sum();
                        out[(a * d1 + s, t * r + c)] = x;
                    }
                }
            }
        }
        self.split_pair(i, out, d1, d2, true)
    }

    /// Exchanges the contents of the sites on either side of `bond`,
    /// including their dimensions. The center ends on the right site when
    /// `center_right`.
    fn swap_bond(&mut self, bond: usize, center_right: bool) -> Result<()> {
        let i = bond;
        let (d1, d2) = (self.phys_dims[i], self.phys_dims[i + 1]);
        self.focus(i)?;
        let phi = self.contract_pair(i);
        let (l, r) = (self.tensors[i].left, self.tensors[i + 1].right);
        let mut out = DMatrix::<C64>::zeros(l * d2, d1 * r);
        for a in 0..l {
            for s in 0..d1 {
                for t in 0..d2 {
                    for c in 0..r {
                        out[(a * d2 + t, s * r + c)] = phi[(a * d1 + s, t * r + c)];
                    }
                }
            }
        }
        self.split_pair(i, out, d2, d1, center_right)?;
        self.phys_dims.swap(i, i + 1);
        Ok(())
    }

    /// Moves the center onto site i or i+1, whichever is closer.
    fn focus(&mut self, i: usize) -> Result<()> {
        self.move_center(self.center.clamp(i, i + 1))
    }

    fn move_center(&mut self, to: usize) -> Result<()> {
        while self.center < to {
            let c = self.center;
            let t = &self.tensors[c];
            let (l, d) = (t.left, t.phys);
            let cut = self.truncated_svd(c, t.as_left_matrix(), false)?;
            let k = cut.lambda.len();
            let carry = DMatrix::from_fn(k, cut.vt.ncols(), |a, b| cut.vt[(a, b)] * cut.lambda[a]);
            let next = &self.tensors[c + 1];
            let (d2, r) = (next.phys, next.right);
            let merged = carry * next.as_right_matrix();
            self.tensors[c] = Tensor3::from_matrix(l, d, k, &cut.u);
            self.tensors[c + 1] = Tensor3::from_matrix(k, d2, r, &merged);
            self.lambdas[c] = cut.lambda;
            self.center = c + 1;
        }
        while self.center > to {
            let c = self.center;
            let t = &self.tensors[c];
            let (d, r) = (t.phys, t.right);
            let cut = self.truncated_svd(c - 1, t.as_right_matrix(), false)?;
            let k = cut.lambda.len();
            let carry = DMatrix::from_fn(cut.u.nrows(), k, |a, b| cut.u[(a, b)] * cut.lambda[b]);
            let prev = &self.tensors[c - 1];
            let (l, d1) = (prev.left, prev.phys);
            let merged = prev.as_left_matrix() * carry;
            self.tensors[c] = Tensor3::from_matrix(k, d, r, &cut.vt);
            self.tensors[c - 1] = Tensor3::from_matrix(l, d1, k, &merged);
            self.lambdas[c - 1] = cut.lambda;
            self.center = c - 1;
        }
        Ok(())
    }

    /// `T_i T_{i+1}` as a (left·d_i) × (d_{i+1}·right) matrix.
    fn contract_pair(&self, i: usize) -> DMatrix<C64> {
        self.tensors[i].as_left_matrix() * self.tensors[i + 1].as_right_matrix()
    }

    /// SVD of a block holding the center, cut by the truncation rule. The
    /// dropped fraction is charged to `bond`. `capped` applies `chi_max`.
    fn truncated_svd(&mut self, bond: usize, block: DMatrix<C64>, capped: bool) -> Result<Split> {
        let (u, s, vt) = svd_raw(block)?;
        let total: f64 = s.iter().map(|x| x * x).sum();
        if total <= 0.0 || !total.is_finite() {
            return Err(MnsError::Numerical(format!(
                "vanishing block at bond {bond}"
            )));
        }
        let cap = self.chi_max.filter(|_| capped).unwrap_or(usize::MAX);
        let keep = s
            .iter()
            .take(cap)
            .take_while(|&&x| x >= SCHMIDT_FLOOR)
            .count()
            .max(1);
        let kept: f64 = s[..keep].iter().map(|x| x * x).sum();
        let fraction = ((total - kept) / total).max(0.0);
        if fraction > 0.0 {
            self.discarded[bond] += self.norm_sq * fraction;
            self.norm_sq *= 1.0 - fraction;
        }
        let norm = kept.sqrt();
        Ok(Split {
            u: u.columns(0, keep).into_owned(),
            lambda: s[..keep].iter().map(|x| x / norm).collect(),
            vt: vt.rows(0, keep).into_owned(),
        })
    }

    /// Splits an updated pair `phi` (rows left·d1, columns d2·right) back
    /// into two tensors, truncating the new bond.
    fn split_pair(
        &mut self,
        i: usize,
        phi: DMatrix<C64>,
        d1: usize,
        d2: usize,
        center_right: bool,
    ) -> Result<()> {
        let l = self.tensors[i].left;
        let r = self.tensors[i + 1].right;
        let cut = self.truncated_svd(i, phi, true)?;
        let k = cut.lambda.len();
        let (mut u, mut vt) = (cut.u, cut.vt);
        if center_right {
            for (a, &x) in cut.lambda.iter().enumerate() {
                vt.row_mut(a).scale_mut(x);
            }
            self.center = i + 1;
        } else {
            for (b, &x) in cut.lambda.iter().enumerate() {
                u.column_mut(b).scale_mut(x);
            }
            self.center = i;
        }
        self.tensors[i] = Tensor3::from_matrix(l, d1, k, &u);
        self.tensors[i + 1] = Tensor3::from_matrix(k, d2, r, &vt);
        self.lambdas[i] = cut.lambda;
        Ok(())
    }

    /// Rényi-α entropy (nats) of the Schmidt spectrum at a bond.
    pub fn bond_entropy(&self, bond: usize, alpha: f64) -> Result<f64> {
        if bond + 1 >= self.site_count() {
            return Err(MnsError::InvalidParameter(format!(
                "bond {bond} out of range for {} sites",
                self.site_count()
            )));
        }
        let probs: Vec<f64> = self.lambdas[bond].iter().map(|x| x * x).collect();
        renyi_entropy(&probs, alpha)
    }

    /// Dense amplitudes, site 0 most significant.
    pub fn to_statevector(&self) -> Result<Vec<C64>> {
        let total = self
            .phys_dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .filter(|&n| n <= STATEVECTOR_MAX_DIM)
            .ok_or_else(|| {
                MnsError::ResourceLimit(format!(
                    "statevector of {:?} exceeds {STATEVECTOR_MAX_DIM} entries",
                    self.phys_dims
                ))
            })?;
        // rows: prefix index, cols: open bond
        let mut acc = vec![ONE];
        let mut prefix = 1usize;
        for t in &self.tensors {
            let mut next = vec![ZERO; prefix * t.phys * t.right];
            for p in 0..prefix {
                for a in 0..t.left {
                    let x = acc[p * t.left + a];
                    if x == ZERO {
                        continue;
                    }
                    for s in 0..t.phys {
                        for b in 0..t.right {
                            next[(p * t.phys + s) * t.right + b] += x * t.at(a, s, b);
                        }
                    }
                }
            }
            prefix *= t.phys;
            acc = next;
        }
        debug_assert_eq!(acc.len(), total);
        let scale = self.norm_sq.sqrt();
        Ok(acc.into_iter().map(|z| z * scale).collect())
    }

    /// Largest deviation from the mixed-canonical conditions: left isometries
    /// before the center, right isometries after it, unit-norm center.
    pub fn canonical_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for (k, t) in self.tensors.iter().enumerate() {
            if k < self.center {
                // Σ_s A^s† A^s = I
                for b in 0..t.right {
                    for b2 in 0..t.right {
                        let mut x = ZERO;
                        for a in 0..t.left {
                            for s in 0..t.phys {
                                x += t.at(a, s, b).conj() * t.at(a, s, b2);
                            }
                        }
                        if b == b2 {
                            x -= ONE;
                        }
                        worst = worst.max(x.norm());
                    }
                }
            } else if k > self.center {
                // Σ_s B^s B^s† = I
                for a in 0..t.left {
                    for a2 in 0..t.left {
                        let mut x = ZERO;
                        for s in 0..t.phys {
                            for b in 0..t.right {
                                x += t.at(a, s, b) * t.at(a2, s, b).conj();
                            }
                        }
                        if a == a2 {
                            x -= ONE;
                        }
                        worst = worst.max(x.norm());
                    }
                }
            } else {
                let n: f64 = t.data.iter().map(|z| z.norm_sqr()).sum();
                worst = worst.max((n - 1.0).abs());
            }
        }
        worst
    }

    /// Sampler with precomputed environments; reuse for many draws.
    pub fn sampler(&self) -> Sampler<'_> {
        Sampler::new(self)
    }
}

/// Rényi-α entropy in nats of a probability vector; von Neumann at α→1.
pub fn renyi_entropy(probs: &[f64], alpha: f64) -> Result<f64> {
    if alpha <= 0.0 || !alpha.is_finite() {
        return Err(MnsError::Domain {
            name: "alpha",
            value: alpha,
            expected: "> 0",
        });
    }
    let s = if (alpha - 1.0).abs() < 1e-9 {
        -probs
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| p * p.ln())
            .sum::<f64>()
    } else {
        let tr: f64 = probs.iter().filter(|&&p| p > 0.0).map(|&p| p.powf(alpha)).sum();
        tr.ln() / (1.0 - alpha)
    };
    Ok(s.max(0.0))
}
