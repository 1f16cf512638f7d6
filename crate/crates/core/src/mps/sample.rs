use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::MpsState;
use crate::error::{MnsError, Result};
use crate::linalg::{C64, ONE, ZERO};

/// Conditional norms below this abort a draw.
pub const SAMPLING_NORM_FLOOR: f64 = 1e-14;

/// Left-to-right Born sampler over one state.
///
/// Right environments `R_k = Σ_s T_k^s R_{k+1} T_k^s†` are computed once, so
/// the draw follows the exact Born distribution of the stored tensors in
/// whatever gauge they are in.
pub struct Sampler<'a> {
    state: &'a MpsState,
    envs: Vec<Vec<C64>>,
}

impl<'a> Sampler<'a> {
    pub(super) fn new(state: &'a MpsState) -> Self {
        let l = state.site_count();
        let mut envs = vec![Vec::new(); l + 1];
        envs[l] = vec![ONE];
        for k in (0..l).rev() {
            let t = state.site_tensor(k);
            let next = &envs[k + 1];
            let (r, d) = (t.right, t.phys);
            // tmp[a, s, b2] = Σ_b B[a,s,b] R[b,b2]
            let mut tmp = vec![ZERO; t.left * d * r];
            for a in 0..t.left {
                for s in 0..d {
                    for b in 0..r {
                        let x = t.at(a, s, b);
                        if x == ZERO {
                            continue;
                        }
                        for b2 in 0..r {
                            tmp[(a * d + s) * r + b2] += x * next[b * r + b2];
                        }
                    }
                }
            }
            let mut env = vec![ZERO; t.left * t.left];
            for a in 0..t.left {
                for a2 in 0..t.left {
                    let mut acc = ZERO;
                    for s in 0..d {
                        for b2 in 0..r {
                            acc += tmp[(a * d + s) * r + b2] * t.at(a2, s, b2).conj();
                        }
                    }
                    env[a * t.left + a2] = acc;
                }
            }
            envs[k] = env;
        }
        Self { state, envs }
    }

    /// One outcome string.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<usize>> {
        let l = self.state.site_count();
        let mut left = vec![ONE];
        let mut outcome = Vec::with_capacity(l);
        let mut weights = Vec::new();
        for k in 0..l {
            let t = self.state.site_tensor(k);
            let env = &self.envs[k + 1];
            let r = t.right;
            let candidates: Vec<Vec<C64>> = (0..t.phys)
                .map(|s| {
                    (0..r)
                        .map(|b| (0..t.left).map(|a| left[a] * t.at(a, s, b)).sum())
                        .collect()
                })
                .collect();
            weights.clear();
            for w in &candidates {
                let mut q = ZERO;
                for b in 0..r {
                    if w[b] == ZERO {
                        continue;
                    }
                    for b2 in 0..r {
                        q += w[b].conj() * env[b * r + b2] * w[b2];
                    }
                }
                weights.push(q.re.max(0.0));
            }
            let total: f64 = weights.iter().sum();
            if !(total >= SAMPLING_NORM_FLOOR) {
                return Err(MnsError::Sampling { site: k, norm: total });
            }
            let u: f64 = rng.random::<f64>() * total;
            let mut pick = weights.len() - 1;
            let mut cum = 0.0;
            for (s, &w) in weights.iter().enumerate() {
                cum += w;
                if u < cum && w > 0.0 {
                    pick = s;
                    break;
                }
            }
            while weights[pick] == 0.0 {
                pick -= 1;
            }
            let scale = 1.0 / weights[pick].sqrt();
            left = candidates[pick].iter().map(|z| z * scale).collect();
            outcome.push(pick);
        }
        Ok(outcome)
    }
}

impl MpsState {
    /// Single seeded draw.
    pub fn sample_outcome(&self, seed: u64) -> Result<Vec<usize>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.sampler().sample(&mut rng)
    }
}
