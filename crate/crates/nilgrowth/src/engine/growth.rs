//! Volume and geodesic growth from a norm table.
//!
//! Geodesic counting is a layered dynamic program over exact element
//! identities: `c_0(e) = 1` and a geodesic word of weighted length `n` ending
//! at `g` extends by a letter `s` exactly when the norm of `g s` is
//! `n + sigma(s)`. Every prefix of a geodesic is geodesic, so the counts are
//! complete, and `gamma(n)` is the sum of layer `n`'s counts. Counts are
//! arbitrary-precision.

use super::bfs::NormTable;
use super::EngineError;
use crate::group::GroupDescriptor;
use crate::rat::{Rational, rat_int};
use crate::word::GenSet;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::collections::HashMap;

/// Number of geodesic words of each weighted length `0..=radius`.
pub fn geodesic_counts(
    table: &NormTable,
    desc: &GroupDescriptor,
    gens: &GenSet,
) -> Result<Vec<BigUint>, EngineError> {
    let radius = table.radius();
    let letters: Vec<(crate::group::GroupElement, u64)> = gens
        .letters()
        .iter()
        .map(|l| (l.element.clone(), l.weight))
        .collect();
    let max_w = letters.iter().map(|(_, w)| *w).max().unwrap_or(1) as usize;

    let mut buckets: Vec<HashMap<Vec<u8>, BigUint>> =
        vec![HashMap::new(); radius as usize + max_w + 1];
    buckets[0].insert(desc.encode(&desc.id()), BigUint::one());

    let mut gamma = Vec::with_capacity(radius as usize + 1);
    for n in 0..=radius {
        let layer = std::mem::take(&mut buckets[n as usize]);
        let mut total = BigUint::zero();
        for c in layer.values() {
            total += c;
        }
        gamma.push(total);
        if n == radius {
            break;
        }
        for (enc, count) in &layer {
            let g = desc.decode(enc)?;
            for (le, w) in &letters {
                let target = u64::from(n) + w;
                if target > u64::from(radius) {
                    continue;
                }
                let h = desc.mul(&g, le)?;
                let he = desc.encode(&h);
                if table.norm_of_encoding(&he) == Some(target as u32) {
                    *buckets[target as usize].entry(he).or_default() += count;
                }
            }
        }
    }
    Ok(gamma)
}

/// Count geodesic words of weighted length exactly `n` by enumerating every
/// word, the brute-force cross-check for the dynamic program.
pub fn brute_force_gamma(
    table: &NormTable,
    desc: &GroupDescriptor,
    gens: &GenSet,
    n: u32,
) -> Result<BigUint, EngineError> {
    if n > table.radius() {
        return Err(EngineError::OutOfRadius {
            radius: table.radius(),
            needed: n,
        });
    }
    fn recurse(
        table: &NormTable,
        desc: &GroupDescriptor,
        letters: &[(crate::group::GroupElement, u64)],
        g: &crate::group::GroupElement,
        len: u64,
        n: u64,
        acc: &mut BigUint,
    ) -> Result<(), EngineError> {
        if len == n {
            if table.norm_of(desc, g) == Some(n as u32) {
                *acc += BigUint::one();
            }
            return Ok(());
        }
        for (le, w) in letters {
            if len + w <= n {
                let h = desc.mul(g, le)?;
                recurse(table, desc, letters, &h, len + w, n, acc)?;
            }
        }
        Ok(())
    }
    let letters: Vec<(crate::group::GroupElement, u64)> = gens
        .letters()
        .iter()
        .map(|l| (l.element.clone(), l.weight))
        .collect();
    let mut acc = BigUint::zero();
    recurse(table, desc, &letters, &desc.id(), 0, u64::from(n), &mut acc)?;
    Ok(acc)
}

/// Volume and geodesic growth side by side, with the diagnostic ratio trace
/// `beta(n) / n^d` as exact rationals (`None` at `n = 0`).
#[derive(Debug, Clone)]
pub struct GrowthReport {
    pub beta_layers: Vec<u64>,
    pub beta: Vec<u64>,
    pub gamma: Vec<BigUint>,
    pub bass_guivarch: u64,
    pub ratios: Vec<Option<Rational>>,
}

pub fn growth_report(
    table: &NormTable,
    desc: &GroupDescriptor,
    gens: &GenSet,
) -> Result<GrowthReport, EngineError> {
    let beta_layers = table.layer_sizes();
    let beta = table.ball_sizes();
    let gamma = geodesic_counts(table, desc, gens)?;
    let d = desc.bass_guivarch();
    let ratios = beta
        .iter()
        .enumerate()
        .map(|(n, &b)| {
            if n == 0 {
                None
            } else {
                let nd = rat_int(n as i64).pow(d as i32);
                Some(rat_int(b as i64) / nd)
            }
        })
        .collect();
    Ok(GrowthReport {
        beta_layers,
        beta,
        gamma,
        bass_guivarch: d,
        ratios,
    })
}
