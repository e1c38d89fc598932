//! Growth classification by facet incidence.
//!
//! The pipeline: enumerate simple cycle words, project each to its average
//! abelianization point, take the convex hull of the orbit under the finite
//! quotient's action, and inspect which cycle points share a facet. No two
//! cycle points on a common facet means polynomial geodesic growth for
//! nilpotency class at most 2 and the sub-exponential bound
//! `exp(n^alpha_s log n)` for class `s >= 3`; otherwise the growth is
//! exponential, witnessed by the offending pair.

use crate::geom::{convex_hull, GeomError, PolytopeQ, VecQ};
use crate::group::{FiniteElement, GroupDescriptor, GroupElement};
use crate::rat::{fmt_rat, rat_int, Rational};
use crate::schreier::{build_graph, loop_erase, simple_cycles, x_of_s, SchreierError, XLetter};
use crate::word::{evaluate, GenSet, Word};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CriterionError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Schreier(#[from] SchreierError),
    #[error(transparent)]
    Group(#[from] crate::group::GroupError),
}

/// One simple cycle with its normalized abelianization point.
#[derive(Debug, Clone)]
pub struct CycleDatum {
    pub word: Word,
    pub point: VecQ,
    pub element: GroupElement,
    pub len: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Two cycle points (by index into the multiset) share the given facet.
    Exponential { witness: (usize, usize), facet: usize },
    Polynomial { s: u32 },
    SubExponential { s: u32, alpha: Rational },
}

/// Everything the classifier computed, in deterministic order.
#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub group: String,
    pub a: Vec<CycleDatum>,
    /// Orbit of the cycle points under the finite action, sorted, deduplicated.
    pub orbit_points: Vec<VecQ>,
    pub polytope: Option<PolytopeQ>,
    /// Per facet (in the polytope's order), indices into `a` lying on it.
    pub incidence: Vec<Vec<usize>>,
    pub verdict: Option<Verdict>,
    /// Affine-hull dimension when the orbit was not full-dimensional.
    pub degenerate: Option<usize>,
}

/// The cycle multiset `A(S)`: one entry per simple cycle word, with the point
/// `pi(u) / l(u)`.
pub fn build_a(
    desc: &GroupDescriptor,
    gens: &GenSet,
) -> Result<Vec<CycleDatum>, CriterionError> {
    let graph = build_graph(desc, gens);
    let mut out = Vec::new();
    for word in simple_cycles(&graph, gens) {
        let element = evaluate(&word, gens, desc)?;
        let len = word.letter_len();
        let point = desc
            .pi_ab(&element)?
            .scale(&(rat_int(1) / rat_int(len as i64)));
        out.push(CycleDatum {
            word,
            point,
            element,
            len,
        });
    }
    Ok(out)
}

/// Run the full classification for `(desc, gens)`.
pub fn classify(
    desc: &GroupDescriptor,
    gens: &GenSet,
) -> Result<CriterionReport, CriterionError> {
    let a = build_a(desc, gens)?;
    let dim = desc.ab_dim();
    let mut orbit: Vec<VecQ> = Vec::new();
    for datum in &a {
        for f in 0..desc.finite().size() {
            orbit.push(desc.act_point(FiniteElement(f), &datum.point));
        }
    }
    orbit.sort();
    orbit.dedup();

    let polytope = match convex_hull(&orbit, dim) {
        Ok(p) => p,
        Err(GeomError::DegeneratePolytope { affine_dim, .. }) => {
            return Ok(CriterionReport {
                group: desc.name().to_string(),
                a,
                orbit_points: orbit,
                polytope: None,
                incidence: Vec::new(),
                verdict: None,
                degenerate: Some(affine_dim),
            });
        }
        Err(e) => return Err(e.into()),
    };

    let incidence: Vec<Vec<usize>> = polytope
        .facets()
        .iter()
        .map(|f| {
            (0..a.len())
                .filter(|&i| f.contains(&a[i].point))
                .collect()
        })
        .collect();

    let s = desc.class_s();
    let verdict = match incidence.iter().position(|m| m.len() >= 2) {
        Some(fi) => Verdict::Exponential {
            witness: (incidence[fi][0], incidence[fi][1]),
            facet: fi,
        },
        None if s <= 2 => Verdict::Polynomial { s },
        None => Verdict::SubExponential { s, alpha: alpha(s) },
    };

    Ok(CriterionReport {
        group: desc.name().to_string(),
        a,
        orbit_points: orbit,
        polytope: Some(polytope),
        incidence,
        verdict: Some(verdict),
        degenerate: None,
    })
}

/// The sub-exponential exponent sequence: `alpha_2 = 0` and
/// `alpha_s = (1 - alpha_{s-1}/s) / (2 - alpha_{s-1} - 1/s)` for `s >= 3`,
/// exact rationals throughout.
pub fn alpha(s: u32) -> Rational {
    assert!(s >= 2, "alpha is defined for s >= 2");
    let mut a = rat_int(0);
    for k in 3..=s {
        let k = rat_int(k as i64);
        let one = rat_int(1);
        a = (&one - &a / &k) / (rat_int(2) - &a - one / k);
    }
    a
}

/// Volume-growth error-term exponent: 1 for classes 1 and 2, else `1/s`.
pub fn delta(s: u32) -> Rational {
    assert!(s >= 1, "delta is defined for s >= 1");
    if s <= 2 {
        rat_int(1)
    } else {
        rat_int(1) / rat_int(s as i64)
    }
}

/// A run-merged block of a loop-erasure decomposition.
#[derive(Debug, Clone)]
pub struct XBlock {
    pub letter: XLetter,
    pub multiplicity: u64,
}

/// Merge consecutive equal decomposition letters into blocks.
pub fn merge_blocks(letters: Vec<XLetter>) -> Vec<XBlock> {
    let mut out: Vec<XBlock> = Vec::new();
    for x in letters {
        match out.last_mut() {
            Some(b) if b.letter.path == x.path && b.letter.cycle == x.cycle => {
                b.multiplicity += 1
            }
            _ => out.push(XBlock {
                letter: x,
                multiplicity: 1,
            }),
        }
    }
    out
}

/// Costly-subword count `N`: blocks whose point is interior to `p`, plus
/// adjacent block pairs whose points lie on no common face.
pub fn costly_count(
    desc: &GroupDescriptor,
    blocks: &[XBlock],
    p: &PolytopeQ,
) -> Result<u64, CriterionError> {
    let points: Vec<VecQ> = blocks
        .iter()
        .map(|b| {
            Ok(desc
                .pi_ab(&b.letter.element)?
                .scale(&(rat_int(1) / rat_int(b.letter.cost as i64))))
        })
        .collect::<Result<_, CriterionError>>()?;
    let mut n = 0;
    for pt in &points {
        if p.facets_containing(pt)?.is_empty() {
            n += 1;
        }
    }
    for w in points.windows(2) {
        if !p.on_common_face(&w[0], &w[1])? {
            n += 1;
        }
    }
    Ok(n)
}

/// Precomputed data for coarse-length bound checks over one `(desc, gens)`.
pub struct XContext {
    pub graph: crate::schreier::SchreierGraph,
    pub x_letters: Vec<XLetter>,
    /// Hull of the normalized points of `X(S)`; equals `P(S)`.
    pub polytope: PolytopeQ,
}

impl XContext {
    pub fn new(desc: &GroupDescriptor, gens: &GenSet) -> Result<XContext, CriterionError> {
        let graph = build_graph(desc, gens);
        let x_letters = x_of_s(&graph, gens, desc)?;
        let points: Vec<VecQ> = x_letters
            .iter()
            .map(|x| {
                Ok(desc
                    .pi_ab(&x.element)?
                    .scale(&(rat_int(1) / rat_int(x.cost as i64))))
            })
            .collect::<Result<_, CriterionError>>()?;
        let polytope = convex_hull(&points, desc.ab_dim())?;
        Ok(XContext {
            graph,
            x_letters,
            polytope,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KBoundReport {
    /// Coarse length of the merged decomposition.
    pub coarse_len: u64,
    /// Costly count of the merged decomposition.
    pub costly: u64,
    /// `costly * [G:H] + 1`.
    pub bound: u64,
    pub ok: bool,
}

/// Decompose `w` (which must evaluate into the kernel), merge blocks, and
/// check `k <= N * [G:H] + 1`.
pub fn k_bound_check(
    ctx: &XContext,
    desc: &GroupDescriptor,
    gens: &GenSet,
    word: &Word,
) -> Result<KBoundReport, CriterionError> {
    let letters = loop_erase(word, &ctx.graph, gens, desc)?;
    let blocks = merge_blocks(letters);
    let coarse_len = blocks.len() as u64;
    let costly = costly_count(desc, &blocks, &ctx.polytope)?;
    let bound = costly * desc.kernel_index() as u64 + 1;
    Ok(KBoundReport {
        coarse_len,
        costly,
        bound,
        ok: coarse_len <= bound,
    })
}

// ---------------------------------------------------------------------------
// JSON serialization of reports.
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct CycleJson {
    word: String,
    point: Vec<String>,
    len: u64,
}

#[derive(Serialize)]
struct FacetJson {
    normal: Vec<String>,
    offset: String,
}

#[derive(Serialize)]
struct PolytopeJson {
    vertices: Vec<Vec<String>>,
    facets: Vec<FacetJson>,
}

#[derive(Serialize)]
struct WitnessJson {
    cycles: [usize; 2],
    facet: usize,
}

#[derive(Serialize)]
struct VerdictJson {
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    s: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<WitnessJson>,
}

#[derive(Serialize)]
struct ReportJson {
    group: String,
    a_multiset: Vec<CycleJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    polytope: Option<PolytopeJson>,
    incidence: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verdict: Option<VerdictJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    degenerate_affine_dim: Option<usize>,
}

fn point_json(p: &VecQ) -> Vec<String> {
    p.coords().iter().map(fmt_rat).collect()
}

/// Stable JSON shape for a report; identical reports serialize identically.
pub fn report_json(report: &CriterionReport, gens: &GenSet) -> serde_json::Value {
    let dto = ReportJson {
        group: report.group.clone(),
        a_multiset: report
            .a
            .iter()
            .map(|c| CycleJson {
                word: c.word.display(gens),
                point: point_json(&c.point),
                len: c.len,
            })
            .collect(),
        polytope: report.polytope.as_ref().map(|p| PolytopeJson {
            vertices: p.vertices().iter().map(point_json).collect(),
            facets: p
                .facets()
                .iter()
                .map(|f| FacetJson {
                    normal: point_json(f.normal()),
                    offset: fmt_rat(f.offset()),
                })
                .collect(),
        }),
        incidence: report.incidence.clone(),
        verdict: report.verdict.as_ref().map(|v| match v {
            Verdict::Exponential { witness, facet } => VerdictJson {
                kind: "exponential",
                s: None,
                alpha: None,
                witness: Some(WitnessJson {
                    cycles: [witness.0, witness.1],
                    facet: *facet,
                }),
            },
            Verdict::Polynomial { s } => VerdictJson {
                kind: "polynomial",
                s: Some(*s),
                alpha: None,
                witness: None,
            },
            Verdict::SubExponential { s, alpha } => VerdictJson {
                kind: "sub_exponential",
                s: Some(*s),
                alpha: Some(fmt_rat(alpha)),
                witness: None,
            },
        }),
        degenerate_affine_dim: report.degenerate,
    };
    serde_json::to_value(dto).expect("report serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::lookup;
    use crate::rat::rat;
    use crate::word::parse_word;

    fn fixture(name: &str) -> (&'static GroupDescriptor, GenSet) {
        let d = lookup(name).unwrap();
        let gens = GenSet::default_for(d);
        (d, gens)
    }

    fn points_of(a: &[CycleDatum]) -> Vec<VecQ> {
        a.iter().map(|c| c.point.clone()).collect()
    }

    #[test]
    fn build_a_fixtures() {
        let (d, gens) = fixture("vE");
        let a = build_a(d, &gens).unwrap();
        assert_eq!(
            points_of(&a),
            [
                VecQ::from_ints(&[1, 1]),
                VecQ::from_ints(&[-1, -1]),
                VecQ::from_ints(&[0, 0]),
            ]
        );

        let (d, gens) = fixture("Z2");
        let a = build_a(d, &gens).unwrap();
        assert_eq!(
            points_of(&a),
            [
                VecQ::from_ints(&[1, 0]),
                VecQ::from_ints(&[-1, 0]),
                VecQ::from_ints(&[0, 1]),
                VecQ::from_ints(&[0, -1]),
            ]
        );

        let (d, gens) = fixture("G2rot");
        let a = build_a(d, &gens).unwrap();
        assert_eq!(
            points_of(&a),
            [
                VecQ::from_ints(&[1, 0]),
                VecQ::from_ints(&[0, 1]),
                VecQ::from_ints(&[-1, -1]),
                VecQ::from_ints(&[0, 0]),
            ]
        );
    }

    #[test]
    fn classify_ve_subexponential() {
        let (d, gens) = fixture("vE");
        let r = classify(d, &gens).unwrap();
        let p = r.polytope.as_ref().unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert!(p.vertices().contains(&VecQ::from_ints(&[1, 1])));
        assert!(r.incidence.iter().all(|m| m.len() == 1));
        assert_eq!(
            r.verdict,
            Some(Verdict::SubExponential {
                s: 3,
                alpha: rat(3, 5)
            })
        );
    }

    #[test]
    fn classify_z2_exponential() {
        let (d, gens) = fixture("Z2");
        let r = classify(d, &gens).unwrap();
        match r.verdict {
            Some(Verdict::Exponential { witness, facet }) => {
                // Both witness points really satisfy the facet equality.
                let f = r.polytope.as_ref().unwrap().facet(facet);
                assert!(f.contains(&r.a[witness.0].point));
                assert!(f.contains(&r.a[witness.1].point));
                assert_ne!(r.a[witness.0].word, r.a[witness.1].word);
            }
            other => panic!("expected exponential, got {other:?}"),
        }
    }

    #[test]
    fn classify_g2rot_polynomial() {
        let (d, gens) = fixture("G2rot");
        let r = classify(d, &gens).unwrap();
        assert_eq!(r.polytope.as_ref().unwrap().vertices().len(), 6);
        assert_eq!(r.verdict, Some(Verdict::Polynomial { s: 1 }));
    }

    #[test]
    fn classify_vh_polynomial_diamond() {
        let (d, gens) = fixture("vH");
        let r = classify(d, &gens).unwrap();
        let p = r.polytope.as_ref().unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert!(p.vertices().contains(&VecQ::from_ints(&[0, 1])));
        assert_eq!(r.verdict, Some(Verdict::Polynomial { s: 2 }));
    }

    #[test]
    fn classify_z1_polynomial() {
        let (d, gens) = fixture("Z1");
        let r = classify(d, &gens).unwrap();
        assert_eq!(r.verdict, Some(Verdict::Polynomial { s: 1 }));
    }

    #[test]
    fn alpha_values() {
        assert_eq!(alpha(2), rat_int(0));
        assert_eq!(alpha(3), rat(3, 5));
        assert_eq!(alpha(4), rat(17, 23));
        let mut prev = alpha(2);
        for s in 3..=20 {
            let a = alpha(s);
            assert!(a > prev && a >= rat_int(0) && a < rat_int(1), "s={s}");
            prev = a;
        }
    }

    #[test]
    fn delta_values() {
        assert_eq!(delta(1), rat_int(1));
        assert_eq!(delta(2), rat_int(1));
        assert_eq!(delta(5), rat(1, 5));
    }

    #[test]
    fn costly_count_cases() {
        let (d, gens) = fixture("vE");
        let ctx = XContext::new(d, &gens).unwrap();
        let decompose = |text: &str| {
            let w = parse_word(text, &gens).unwrap();
            merge_blocks(loop_erase(&w, &ctx.graph, &gens, d).unwrap())
        };
        // Blocks on one facet: a-loops only.
        assert_eq!(costly_count(d, &decompose("a^4"), &ctx.polytope).unwrap(), 0);
        // Decomposes to [a], [t|a], [t^2] with points (1,1), (-1,1), (0,0):
        // the first pair shares the facet y = 1, the trailing interior point
        // costs 1 as a block and 1 as half of a faceless pair.
        assert_eq!(
            costly_count(d, &decompose("a t a t"), &ctx.polytope).unwrap(),
            2
        );
        // (1,1) then (-1,-1): opposite corners share no face.
        assert_eq!(
            costly_count(d, &decompose("a a^-1"), &ctx.polytope).unwrap(),
            1
        );
    }

    #[test]
    fn costly_pair_via_conjugates() {
        // Direct block-level checks without loop-erasure.
        let (d, gens) = fixture("vE");
        let ctx = XContext::new(d, &gens).unwrap();
        let x = |i: usize| XBlock {
            letter: ctx.x_letters[i].clone(),
            multiplicity: 1,
        };
        // x_letters order: [a], [a^-1], [t^2], [t|a], [t|a^-1], [t|t^2]
        let a_then_conj = vec![x(0), x(3)];
        assert_eq!(costly_count(d, &a_then_conj, &ctx.polytope).unwrap(), 0);
        let a_then_ainv = vec![x(0), x(1)];
        assert_eq!(costly_count(d, &a_then_ainv, &ctx.polytope).unwrap(), 1);
    }

    #[test]
    fn k_bound_trivial_word() {
        let (d, gens) = fixture("vE");
        let ctx = XContext::new(d, &gens).unwrap();
        let w = parse_word("a^5", &gens).unwrap();
        let r = k_bound_check(&ctx, d, &gens, &w).unwrap();
        assert_eq!(
            r,
            KBoundReport {
                coarse_len: 1,
                costly: 0,
                bound: 1,
                ok: true
            }
        );
    }

    #[test]
    fn k_bound_family_word() {
        let (d, gens) = fixture("vE");
        let ctx = XContext::new(d, &gens).unwrap();
        let w = parse_word("a^2 t a^-4 t a^2", &gens).unwrap();
        let r = k_bound_check(&ctx, d, &gens, &w).unwrap();
        assert!(r.ok, "{r:?}");
    }

    #[test]
    fn verdict_invariant_under_unimodular_change_of_basis() {
        // Recompute the vE incidence pattern after x -> x + y sheared
        // coordinates; the facet-sharing structure must not change.
        let (d, gens) = fixture("vE");
        let r = classify(d, &gens).unwrap();
        let shear = |p: &VecQ| {
            VecQ::new(vec![
                p.get(0) + p.get(1),
                p.get(1).clone(),
            ])
        };
        let a_pts: Vec<VecQ> = r.a.iter().map(|c| shear(&c.point)).collect();
        let orbit: Vec<VecQ> = r.orbit_points.iter().map(&shear).collect();
        let p = convex_hull(&orbit, 2).unwrap();
        let sheared_incidence: Vec<Vec<usize>> = p
            .facets()
            .iter()
            .map(|f| (0..a_pts.len()).filter(|&i| f.contains(&a_pts[i])).collect())
            .collect();
        let mut old: Vec<Vec<usize>> = r.incidence.clone();
        let mut new: Vec<Vec<usize>> = sheared_incidence;
        old.sort();
        new.sort();
        assert_eq!(old, new);
    }

    #[test]
    fn report_json_shape() {
        let (d, gens) = fixture("vE");
        let r = classify(d, &gens).unwrap();
        let v = report_json(&r, &gens);
        assert_eq!(v["group"], "vE");
        assert_eq!(v["a_multiset"][0]["word"], "a");
        assert_eq!(v["a_multiset"][2]["len"], 2);
        assert_eq!(v["verdict"]["kind"], "sub_exponential");
        assert_eq!(v["verdict"]["alpha"], "3/5");
        assert_eq!(v["polytope"]["vertices"].as_array().unwrap().len(), 4);
    }
}
