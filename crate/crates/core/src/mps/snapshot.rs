//! Binary snapshot of an [`MpsState`].
//!
//! Layout, all little-endian:
//! magic `MPS1`; `L: u64`; `L × d_k: u64`; `chi: u64` (0 = unbounded);
//! per site `(left, phys, right): 3 × u64` then Γ entries as (re, im) f64
//! pairs; per bond `len: u64` then λ as f64; per bond discarded weight f64;
//! norm² f64.

use std::io::{Read, Write};

use super::{MpsState, Tensor3};
use crate::error::{MnsError, Result};
use crate::linalg::C64;

const MAGIC: &[u8; 4] = b"MPS1";

fn put_u64(w: &mut impl Write, x: u64) -> Result<()> {
    Ok(w.write_all(&x.to_le_bytes())?)
}

fn put_f64(w: &mut impl Write, x: f64) -> Result<()> {
    Ok(w.write_all(&x.to_le_bytes())?)
}

fn get_u64(r: &mut impl Read) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn get_f64(r: &mut impl Read) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

fn get_len(r: &mut impl Read, limit: u64, what: &str) -> Result<usize> {
    let x = get_u64(r)?;
    if x > limit {
        return Err(MnsError::Snapshot(format!("{what} {x} exceeds {limit}")));
    }
    Ok(x as usize)
}

impl MpsState {
    pub fn write_snapshot(&self, w: &mut impl Write) -> Result<()> {
        w.write_all(MAGIC)?;
        put_u64(w, self.site_count() as u64)?;
        for &d in &self.phys_dims {
            put_u64(w, d as u64)?;
        }
        put_u64(w, self.chi_max.map_or(0, |c| c as u64))?;
        let (gammas, lambdas) = self.vidal()?;
        for g in &gammas {
            for x in [g.left, g.phys, g.right] {
                put_u64(w, x as u64)?;
            }
            for z in &g.data {
                put_f64(w, z.re)?;
                put_f64(w, z.im)?;
            }
        }
        for lam in &lambdas {
            put_u64(w, lam.len() as u64)?;
            for &x in lam {
                put_f64(w, x)?;
            }
        }
        for &x in &self.discarded {
            put_f64(w, x)?;
        }
        put_f64(w, self.norm_sq)
    }

    pub fn read_snapshot(r: &mut impl Read) -> Result<Self> {
        const LIMIT: u64 = 1 << 32;
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(MnsError::Snapshot("bad magic".into()));
        }
        let l = get_len(r, LIMIT, "site count")?;
        if l == 0 {
            return Err(MnsError::Snapshot("zero sites".into()));
        }
        let phys_dims = (0..l)
            .map(|_| get_len(r, LIMIT, "local dimension"))
            .collect::<Result<Vec<_>>>()?;
        let chi_max = match get_u64(r)? {
            0 => None,
            c => Some(c as usize),
        };
        let mut gammas = Vec::with_capacity(l);
        for (k, &d) in phys_dims.iter().enumerate() {
            let left = get_len(r, LIMIT, "bond")?;
            let phys = get_len(r, LIMIT, "local dimension")?;
            let right = get_len(r, LIMIT, "bond")?;
            if phys != d {
                return Err(MnsError::Snapshot(format!("site {k} dimension mismatch")));
            }
            let n = left
                .checked_mul(phys)
                .and_then(|x| x.checked_mul(right))
                .filter(|&n| n as u64 <= LIMIT)
                .ok_or_else(|| MnsError::Snapshot("tensor too large".into()))?;
            let data = (0..n)
                .map(|_| Ok(C64::new(get_f64(r)?, get_f64(r)?)))
                .collect::<Result<Vec<_>>>()?;
            gammas.push(Tensor3 { left, phys, right, data });
        }
        let lambdas = (0..l - 1)
            .map(|_| {
                let n = get_len(r, LIMIT, "bond")?;
                (0..n).map(|_| get_f64(r)).collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let discarded = (0..l - 1).map(|_| get_f64(r)).collect::<Result<Vec<_>>>()?;
        let norm_sq = get_f64(r)?;
        for k in 0..l {
            let left_ok = k == 0 && gammas[k].left == 1 || k > 0 && gammas[k].left == lambdas[k - 1].len();
            let right_ok = k + 1 == l && gammas[k].right == 1
                || k + 1 < l && gammas[k].right == lambdas[k].len();
            if !left_ok || !right_ok {
                return Err(MnsError::Snapshot(format!("site {k} bond mismatch")));
            }
        }
        Ok(Self::from_vidal(gammas, lambdas, chi_max, discarded, norm_sq))
    }
}
