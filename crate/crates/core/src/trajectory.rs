//! Shot loop shared by the photonic and IQP pipelines.
//!
//! Shot `s` draws its branch from stream `2s` and its outcome from stream
//! `2s + 1` of a ChaCha8 generator seeded with the run seed, so results do
//! not depend on scheduling. Shots that drew the same branch share one MPS
//! evolution; this is exact, since the evolved state depends only on the
//! branch.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Result;
use crate::mps::MpsState;
use crate::record::{BranchLabel, SampleRecord};

// Shot index and branch labels of one trajectory in a group.
type Member = (u64, Vec<BranchLabel>);

pub(crate) fn shot_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// One drawn trajectory input: grouping key, labels and evolution data.
pub(crate) struct Draw<K, B> {
    pub key: K,
    pub labels: Vec<BranchLabel>,
    pub data: B,
}

pub(crate) fn run_grouped<K, B, FD, FE>(
    shots: u64,
    seed: u64,
    draw: FD,
    evolve: FE,
) -> Vec<SampleRecord>
where
    K: Ord + Send,
    B: Send + Sync,
    FD: Fn(&mut ChaCha8Rng) -> Result<Draw<K, B>> + Sync,
    FE: Fn(&B) -> Result<MpsState> + Sync,
{
    let mut records = Vec::new();
    let mut groups: BTreeMap<K, (B, Vec<Member>)> = BTreeMap::new();
    for shot in 0..shots {
        match draw(&mut shot_rng(seed, 2 * shot)) {
            Ok(d) => groups
                .entry(d.key)
                .or_insert_with(|| (d.data, Vec::new()))
                .1
                .push((shot, d.labels)),
            Err(e) => records.push(failed(shot, Vec::new(), e.to_string())),
        }
    }
    let groups: Vec<_> = groups.into_values().collect();
    let sampled: Vec<Vec<SampleRecord>> = groups
        .into_par_iter()
        .map(|(data, members)| {
            let state = match evolve(&data) {
                Ok(s) => s,
                Err(e) => {
                    return members
                        .into_iter()
                        .map(|(shot, labels)| failed(shot, labels, e.to_string()))
                        .collect()
                }
            };
            let sampler = state.sampler();
            let discarded = state.discarded_weight();
            let chi = state.max_bond_dim();
            members
                .into_iter()
                .map(|(shot, labels)| {
                    match sampler.sample(&mut shot_rng(seed, 2 * shot + 1)) {
                        Ok(outcome) => SampleRecord {
                            shot,
                            branch_labels: labels,
                            outcome,
                            discarded_weight: discarded,
                            chi,
                            error: None,
                        },
                        Err(e) => failed(shot, labels, e.to_string()),
                    }
                })
                .collect()
        })
        .collect();
    records.extend(sampled.into_iter().flatten());
    records.sort_by_key(|r| r.shot);
    records
}

fn failed(shot: u64, labels: Vec<BranchLabel>, message: String) -> SampleRecord {
    SampleRecord {
        shot,
        branch_labels: labels,
        outcome: Vec::new(),
        discarded_weight: 0.0,
        chi: 0,
        error: Some(message),
    }
}
