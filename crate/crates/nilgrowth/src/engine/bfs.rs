//! Layered breadth-first norm tables.
//!
//! Elements are tracked by their canonical byte encodings, so deduplication
//! is exact. Weighted generating sets run through the same loop as a
//! Dijkstra specialization with integer bucket queues: candidates discovered
//! from distance `n` land in bucket `n + sigma(s)`.
//!
//! Layer contents are sorted before publication, which makes the table
//! independent of the number of workers: expansion only reads the previous
//! layers, and the merged candidate set is a sorted set union regardless of
//! how the frontier was chunked.

use super::EngineError;
use crate::group::{GroupDescriptor, GroupElement};
use crate::word::GenSet;
use rayon::prelude::*;
use std::collections::HashMap;

/// Options for [`bfs_ball`].
#[derive(Debug, Clone)]
pub struct BfsOptions {
    /// Hard cap on the number of stored elements.
    pub max_elements: usize,
    /// Worker threads for frontier expansion; 1 is the reference mode.
    pub workers: usize,
}

impl Default for BfsOptions {
    fn default() -> Self {
        BfsOptions {
            max_elements: 10_000_000,
            workers: 1,
        }
    }
}

/// Exact word-metric table out to a radius: layer `n` holds the canonical
/// encodings of the elements whose norm is exactly `n`.
#[derive(Debug, Clone)]
pub struct NormTable {
    group: String,
    gens_summary: Vec<(String, u64)>,
    fingerprint: u64,
    radius: u32,
    layers: Vec<Vec<Vec<u8>>>,
    index: HashMap<Vec<u8>, u32>,
}

impl NormTable {
    pub(crate) fn from_layers(
        group: String,
        gens_summary: Vec<(String, u64)>,
        fingerprint: u64,
        radius: u32,
        layers: Vec<Vec<Vec<u8>>>,
    ) -> NormTable {
        let mut index = HashMap::new();
        for (n, layer) in layers.iter().enumerate() {
            for enc in layer {
                index.insert(enc.clone(), n as u32);
            }
        }
        NormTable {
            group,
            gens_summary,
            fingerprint,
            radius,
            layers,
            index,
        }
    }

    pub fn group(&self) -> &str {
        &self.group
    }

    pub fn gens_summary(&self) -> &[(String, u64)] {
        &self.gens_summary
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn layers(&self) -> &[Vec<Vec<u8>>] {
        &self.layers
    }

    pub fn layer_sizes(&self) -> Vec<u64> {
        self.layers.iter().map(|l| l.len() as u64).collect()
    }

    /// Cumulative ball sizes `beta(0..=radius)`.
    pub fn ball_sizes(&self) -> Vec<u64> {
        let mut acc = 0;
        self.layers
            .iter()
            .map(|l| {
                acc += l.len() as u64;
                acc
            })
            .collect()
    }

    pub fn total_elements(&self) -> usize {
        self.index.len()
    }

    pub fn norm_of_encoding(&self, enc: &[u8]) -> Option<u32> {
        self.index.get(enc).copied()
    }

    /// Norm of `g`, or `None` when `g` lies outside the computed ball.
    pub fn norm_of(&self, desc: &GroupDescriptor, g: &GroupElement) -> Option<u32> {
        self.norm_of_encoding(&desc.encode(g))
    }

    /// Restriction to a smaller radius (identity when `radius` is not smaller).
    pub fn truncated(self, radius: u32) -> NormTable {
        if radius >= self.radius {
            return self;
        }
        let layers = self.layers[..=radius as usize].to_vec();
        NormTable::from_layers(
            self.group,
            self.gens_summary,
            self.fingerprint,
            radius,
            layers,
        )
    }
}

/// Stable fingerprint of a `(group, generating set)` pair, used to detect
/// cache files built for different data.
pub fn fingerprint(desc: &GroupDescriptor, gens: &GenSet) -> u64 {
    let mut bytes = Vec::new();
    bytes.extend_from_slice(desc.name().as_bytes());
    bytes.push(0);
    for l in gens.letters() {
        bytes.extend_from_slice(l.name.as_bytes());
        bytes.push(0);
        bytes.extend_from_slice(&l.weight.to_le_bytes());
        bytes.extend_from_slice(&desc.encode(&l.element));
        bytes.push(0xff);
    }
    fnv1a64(&bytes)
}

/// 64-bit FNV-1a.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Exact norms of every element within `radius` of the identity.
pub fn bfs_ball(
    desc: &GroupDescriptor,
    gens: &GenSet,
    radius: u32,
    opts: &BfsOptions,
) -> Result<NormTable, EngineError> {
    if opts.workers == 0 || opts.max_elements == 0 {
        return Err(EngineError::InvalidParams(
            "workers and max_elements must be positive".into(),
        ));
    }
    let max_weight = gens.letters().iter().map(|l| l.weight).max().unwrap_or(1);
    let letters: Vec<(GroupElement, u64)> = gens
        .letters()
        .iter()
        .map(|l| (l.element.clone(), l.weight))
        .collect();

    let mut visited: HashMap<Vec<u8>, u32> = HashMap::new();
    let mut layers: Vec<Vec<Vec<u8>>> = Vec::with_capacity(radius as usize + 1);
    let mut pending: Vec<Vec<Vec<u8>>> = vec![Vec::new(); radius as usize + max_weight as usize + 1];
    pending[0].push(desc.encode(&desc.id()));

    for n in 0..=radius {
        let mut cands = std::mem::take(&mut pending[n as usize]);
        cands.sort_unstable();
        cands.dedup();
        let layer: Vec<Vec<u8>> = cands
            .into_iter()
            .filter(|e| !visited.contains_key(e))
            .collect();
        if visited.len() + layer.len() > opts.max_elements {
            return Err(EngineError::MemoryBudgetExceeded {
                budget: opts.max_elements,
                layer: n,
            });
        }
        for e in &layer {
            visited.insert(e.clone(), n);
        }

        if n < radius {
            let expand = |enc: &Vec<u8>| -> Vec<(u64, Vec<u8>)> {
                let g = desc.decode(enc).expect("layer encodings are valid");
                letters
                    .iter()
                    .filter_map(|(le, w)| {
                        let h = desc.mul(&g, le).expect("letters belong to the group");
                        let he = desc.encode(&h);
                        if visited.contains_key(&he) {
                            None
                        } else {
                            Some((u64::from(n) + w, he))
                        }
                    })
                    .collect()
            };
            let produced: Vec<(u64, Vec<u8>)> = if opts.workers == 1 {
                layer.iter().flat_map(|e| expand(e)).collect()
            } else {
                run_in_pool(opts.workers, || {
                    layer.par_iter().flat_map_iter(|e| expand(e)).collect()
                })
            };
            for (dist, enc) in produced {
                if dist <= u64::from(radius) {
                    pending[dist as usize].push(enc);
                }
            }
        }
        layers.push(layer);
    }

    Ok(NormTable::from_layers(
        desc.name().to_string(),
        gens.letters()
            .iter()
            .map(|l| (l.name.clone(), l.weight))
            .collect(),
        fingerprint(desc, gens),
        radius,
        layers,
    ))
}

fn run_in_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool")
        .install(f)
}
