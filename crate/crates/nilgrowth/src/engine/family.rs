//! Desk-scale verification harnesses around the Engel lattice.
//!
//! - [`family_words`] enumerates the alternating-exponent candidate geodesics
//!   with block sizes balanced to within `n^eps`, the comparison done in
//!   exact integer arithmetic by cross-powering.
//! - [`verify_family`] checks each candidate against a BFS norm table and, on
//!   failure, reconstructs a strictly shorter witness word from the layers.
//! - [`by_bound_sweep`] exhaustively tests the barycenter inequality
//!   `24 (k-1)^2 (-B_y) >= n^3` over all balanced positive words with
//!   endpoint `(n, 0)`.
//! - [`norm_gap_check`] pins the word norm of the horizontal lattice point
//!   `(n, 0, 0, 0)` and its gap above `n`.

use super::bfs::NormTable;
use super::EngineError;
use crate::engel::EngelElement;
use crate::group::{lookup, GroupDescriptor, GroupElement};
use crate::rat::{rat_int, Rational};
use crate::word::{evaluate, GenSet, Word};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

/// Letter indices of the standard `vE` generating set `{a, a^-1, t}`.
struct VeLetters {
    a: usize,
    a_inv: usize,
    t: usize,
}

fn ve_letters(gens: &GenSet) -> Result<VeLetters, EngineError> {
    let find = |name: &str| {
        gens.find(name)
            .ok_or_else(|| EngineError::InvalidParams(format!("generating set has no `{name}`")))
    };
    Ok(VeLetters {
        a: find("a")?,
        a_inv: find("a^-1")?,
        t: find("t")?,
    })
}

/// Exact check `|m_i - n/(2K)| <= n^eps` for `eps = p/q`, via
/// `|2K m_i - n|^q <= (2K)^q n^p`.
fn within_band(m_i: u64, n: u64, k: u64, eps: &Rational) -> bool {
    let p = eps.numer().to_u32().expect("eps numerator fits u32");
    let q = eps.denom().to_u32().expect("eps denominator fits u32");
    let lhs = (BigInt::from(2 * k * m_i) - BigInt::from(n)).abs().pow(q);
    let rhs = BigInt::from(2 * k).pow(q) * BigInt::from(n).pow(p);
    lhs <= rhs
}

/// Alternating words `a^{m_1} t a^{-(m_1+m_2)} t a^{m_2+m_3} ... t a^{m_K}`
/// over all tuples with `m_i >= 1`, `2 sum m_i = n`, and every `m_i` within
/// `n^eps` of `n/(2K)`. Each word has weighted length `n + K`.
pub fn family_words(
    gens: &GenSet,
    n: u64,
    k: u64,
    eps: &Rational,
) -> Result<Vec<Word>, EngineError> {
    if n % 2 != 0 || k % 2 != 0 || k < 2 || n < 2 * k {
        return Err(EngineError::InvalidParams(
            "need n, K even with K >= 2 and n >= 2K".into(),
        ));
    }
    if eps.is_negative() {
        return Err(EngineError::InvalidParams("eps must be nonnegative".into()));
    }
    let letters = ve_letters(gens)?;
    let half = n / 2;
    let mut tuple = Vec::with_capacity(k as usize);
    let mut out = Vec::new();
    enumerate_tuples(half, k, n, k, eps, &mut tuple, &mut |ms| {
        out.push(build_family_word(&letters, ms));
    });
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn enumerate_tuples(
    remaining: u64,
    slots: u64,
    n: u64,
    k: u64,
    eps: &Rational,
    tuple: &mut Vec<u64>,
    emit: &mut impl FnMut(&[u64]),
) {
    if slots == 1 {
        if remaining >= 1 && within_band(remaining, n, k, eps) {
            tuple.push(remaining);
            emit(tuple);
            tuple.pop();
        }
        return;
    }
    // Each later slot needs at least 1.
    for m in 1..=remaining.saturating_sub(slots - 1) {
        if !within_band(m, n, k, eps) {
            continue;
        }
        tuple.push(m);
        enumerate_tuples(remaining - m, slots - 1, n, k, eps, tuple, emit);
        tuple.pop();
    }
}

fn build_family_word(l: &VeLetters, ms: &[u64]) -> Word {
    let k = ms.len();
    let mut w = Word::empty();
    w.push_block(l.a, ms[0]);
    for j in 1..k {
        w.push_block(l.t, 1);
        let mag = ms[j - 1] + ms[j];
        if j % 2 == 1 {
            w.push_block(l.a_inv, mag);
        } else {
            w.push_block(l.a, mag);
        }
    }
    w.push_block(l.t, 1);
    w.push_block(l.a, ms[k - 1]);
    w
}

/// Verdict for one family word against a norm table.
#[derive(Debug, Clone)]
pub struct FamilyVerdict {
    pub word: Word,
    pub length: u64,
    pub norm: u32,
    pub geodesic: bool,
    /// A strictly shorter word with the same element, present iff not geodesic.
    pub witness: Option<Word>,
}

#[derive(Debug, Clone)]
pub struct FamilyReport {
    pub n: u64,
    pub k: u64,
    pub eps: Rational,
    pub verdicts: Vec<FamilyVerdict>,
}

impl FamilyReport {
    pub fn all_geodesic(&self) -> bool {
        self.verdicts.iter().all(|v| v.geodesic)
    }
}

/// Check every family word against `table` (radius at least `n + K`).
pub fn verify_family(
    desc: &GroupDescriptor,
    gens: &GenSet,
    table: &NormTable,
    n: u64,
    k: u64,
    eps: &Rational,
) -> Result<FamilyReport, EngineError> {
    let needed = (n + k) as u32;
    if table.radius() < needed {
        return Err(EngineError::OutOfRadius {
            radius: table.radius(),
            needed,
        });
    }
    let mut verdicts = Vec::new();
    for word in family_words(gens, n, k, eps)? {
        let length = word.weighted_len(gens);
        debug_assert_eq!(length, n + k);
        let g = evaluate(&word, gens, desc)?;
        let norm = table
            .norm_of(desc, &g)
            .expect("family element lies within the table radius");
        assert!(u64::from(norm) <= length);
        let geodesic = u64::from(norm) == length;
        let witness = if geodesic {
            None
        } else {
            let w = shortest_witness(table, desc, gens, &g)
                .expect("in-radius element has a geodesic witness");
            debug_assert_eq!(evaluate(&w, gens, desc)?, g);
            debug_assert_eq!(w.weighted_len(gens), u64::from(norm));
            Some(w)
        };
        verdicts.push(FamilyVerdict {
            word,
            length,
            norm,
            geodesic,
            witness,
        });
    }
    Ok(FamilyReport {
        n,
        k,
        eps: eps.clone(),
        verdicts,
    })
}

/// Reconstruct a geodesic word for `g` by walking the table layers backwards:
/// repeatedly find a letter `s` with `norm(g s^-1) = norm(g) - sigma(s)`.
pub fn shortest_witness(
    table: &NormTable,
    desc: &GroupDescriptor,
    gens: &GenSet,
    g: &GroupElement,
) -> Option<Word> {
    let mut cur = g.clone();
    let mut norm = u64::from(table.norm_of(desc, &cur)?);
    let mut rev_letters = Vec::new();
    'outer: while norm > 0 {
        for (i, l) in gens.letters().iter().enumerate() {
            if l.weight > norm {
                continue;
            }
            let prev = desc
                .mul(&cur, &desc.inv(&l.element).ok()?)
                .ok()?;
            if table.norm_of(desc, &prev) == Some((norm - l.weight) as u32) {
                rev_letters.push(i);
                cur = prev;
                norm -= l.weight;
                continue 'outer;
            }
        }
        return None; // cannot happen on a complete table
    }
    rev_letters.reverse();
    Some(Word::from_letters(&rev_letters))
}

/// One word of the exhaustive barycenter sweep.
#[derive(Debug, Clone)]
pub struct ByBoundEntry {
    pub word: Word,
    pub coarse_len: u64,
    /// `-B_y` of the word's element.
    pub neg_moment: Rational,
    /// Slack `24 (k-1)^2 (-B_y) - n^3`; nonnegative iff the bound holds.
    pub slack: Rational,
}

#[derive(Debug, Clone)]
pub struct ByBoundReport {
    pub n: u64,
    pub total_words: u64,
    /// Entries violating the bound (expected empty).
    pub violations: Vec<ByBoundEntry>,
    /// Entries attaining the minimal slack.
    pub minimizers: Vec<ByBoundEntry>,
    pub min_slack: Rational,
}

/// Exhaustive sweep over all words with exactly `n/2` letters `a` and `n/2`
/// letters `b` (every x-step positive, endpoint `(n, 0)`), checking
/// `24 (k(w)-1)^2 (-B_y(w)) >= n^3` in exact arithmetic.
pub fn by_bound_sweep(n: u64) -> Result<ByBoundReport, EngineError> {
    if n < 2 || n % 2 != 0 {
        return Err(EngineError::InvalidParams("n must be even and >= 2".into()));
    }
    if n > 26 {
        return Err(EngineError::InvalidParams(
            "sweep is exhaustive; n > 26 is not desk-scale".into(),
        ));
    }
    let desc = lookup("Engel").expect("registry");
    let gens = GenSet::default_for(desc);
    let ai = gens.find("a").expect("Engel gens");
    let bi = gens.find("b").expect("Engel gens");
    let n_cubed = rat_int(n as i64).pow(3);

    let mut report = ByBoundReport {
        n,
        total_words: 0,
        violations: Vec::new(),
        minimizers: Vec::new(),
        min_slack: Rational::zero(),
    };
    // Walk the binomial tree, carrying the prefix product.
    let mut letters: Vec<usize> = Vec::with_capacity(n as usize);
    let mut prefix: Vec<EngelElement> = vec![EngelElement::identity()];
    sweep_rec(
        n as usize,
        (n / 2) as usize,
        (n / 2) as usize,
        ai,
        bi,
        &mut letters,
        &mut prefix,
        &mut |word_letters, g| {
            let word = Word::from_letters(word_letters);
            let k = word.coarse_len();
            let neg_moment = -g.moment.clone();
            let factor = rat_int(24) * rat_int((k - 1) as i64).pow(2);
            let slack = factor * &neg_moment - &n_cubed;
            let entry = ByBoundEntry {
                word,
                coarse_len: k,
                neg_moment,
                slack: slack.clone(),
            };
            report.total_words += 1;
            if slack.is_negative() {
                report.violations.push(entry.clone());
            }
            if report.total_words == 1 || slack < report.min_slack {
                report.min_slack = slack;
                report.minimizers = vec![entry];
            } else if slack == report.min_slack {
                report.minimizers.push(entry);
            }
        },
    );
    Ok(report)
}

#[allow(clippy::too_many_arguments)]
fn sweep_rec(
    total: usize,
    a_left: usize,
    b_left: usize,
    ai: usize,
    bi: usize,
    letters: &mut Vec<usize>,
    prefix: &mut Vec<EngelElement>,
    emit: &mut impl FnMut(&[usize], &EngelElement),
) {
    if letters.len() == total {
        emit(letters, prefix.last().unwrap());
        return;
    }
    let top = prefix.last().unwrap().clone();
    if a_left > 0 {
        letters.push(ai);
        prefix.push(top.mul(&EngelElement::gen_a()));
        sweep_rec(total, a_left - 1, b_left, ai, bi, letters, prefix, emit);
        prefix.pop();
        letters.pop();
    }
    if b_left > 0 {
        letters.push(bi);
        prefix.push(top.mul(&EngelElement::gen_b()));
        sweep_rec(total, a_left, b_left - 1, ai, bi, letters, prefix, emit);
        prefix.pop();
        letters.pop();
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormGapStatus {
    /// The target is in the lattice; its exact norm and gap above `n`.
    Norm { norm: u32, gap: i64 },
    /// The target fails the lattice congruence: no word of any length
    /// represents it, so the gap is infinite.
    Unreachable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormGapReport {
    pub n: u64,
    pub status: NormGapStatus,
}

/// Word norm of the horizontal element `(n, 0, 0, 0)` over the Engel
/// generating set, from a BFS table.
///
/// The element lies in the lattice only when `n/2` is divisible by 6 (area
/// and moment parity; see [`crate::engel::lattice_contains`]); otherwise the
/// report says so instead of searching forever.
pub fn norm_gap_check(table: &NormTable, n: u64) -> Result<NormGapReport, EngineError> {
    if table.group() != "Engel" {
        return Err(EngineError::InvalidParams(
            "norm-gap check runs over the Engel group table".into(),
        ));
    }
    let desc = lookup("Engel").expect("registry");
    let target = EngelElement::new(rat_int(n as i64), rat_int(0), rat_int(0), rat_int(0));
    if !crate::engel::lattice_contains(&target) {
        return Ok(NormGapReport {
            n,
            status: NormGapStatus::Unreachable,
        });
    }
    let g = GroupElement::Engel(target);
    let norm = table
        .norm_of(desc, &g)
        .ok_or(EngineError::OutOfRadius {
            radius: table.radius(),
            needed: table.radius() + 1,
        })?;
    Ok(NormGapReport {
        n,
        status: NormGapStatus::Norm {
            norm,
            gap: i64::from(norm) - n as i64,
        },
    })
}
