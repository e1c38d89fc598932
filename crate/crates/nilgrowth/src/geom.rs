//! Exact rational linear algebra and convex polytopes.
//!
//! Full-dimensional polytopes carry both a vertex and a facet representation,
//! computed by brute-force supporting-hyperplane enumeration: every facet of
//! `conv(points)` is the hyperplane through some affinely independent
//! `dim`-subset of the input, so enumerating subsets and keeping the
//! supporting ones is exact and complete. Point sets here are tiny (orbits of
//! cycle multisets, well under a hundred points), so correctness wins over
//! asymptotics.

use crate::rat::{fmt_rat, rat_int, Rational};
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    /// The affine hull of the input has dimension `affine_dim < expected`.
    #[error("degenerate polytope: affine hull has dimension {affine_dim}, expected {expected}")]
    DegeneratePolytope { affine_dim: usize, expected: usize },
    #[error("the origin is not contained in the polytope")]
    OriginOutside,
    #[error("point lies outside the polytope")]
    PointOutside,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("empty point set")]
    EmptyPoints,
}

/// A fixed-dimension vector with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VecQ {
    coords: Vec<Rational>,
}

impl VecQ {
    pub fn new(coords: Vec<Rational>) -> Self {
        assert!(!coords.is_empty(), "VecQ must have positive dimension");
        VecQ { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        VecQ::new(coords.iter().map(|&c| rat_int(c)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        VecQ::new(vec![rat_int(0); dim])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn get(&self, i: usize) -> &Rational {
        &self.coords[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &VecQ) -> VecQ {
        self.check_dim(other);
        VecQ::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &VecQ) -> VecQ {
        self.check_dim(other);
        VecQ::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn neg(&self) -> VecQ {
        VecQ::new(self.coords.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, s: &Rational) -> VecQ {
        VecQ::new(self.coords.iter().map(|a| a * s).collect())
    }

    pub fn dot(&self, other: &VecQ) -> Rational {
        self.check_dim(other);
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .fold(rat_int(0), |acc, x| acc + x)
    }

    fn check_dim(&self, other: &VecQ) {
        assert_eq!(self.dim(), other.dim(), "VecQ dimension mismatch");
    }
}

impl fmt::Display for VecQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", fmt_rat(c))?;
        }
        write!(f, ")")
    }
}

// ---------------------------------------------------------------------------
// Exact Gaussian elimination helpers.
// ---------------------------------------------------------------------------

/// Row-reduce in place; returns the pivot column of each reduced row.
fn row_reduce(rows: &mut Vec<Vec<Rational>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x = &*x / &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for c2 in 0..ncols {
                    let sub = &rows[r][c2] * &f;
                    rows[i][c2] = &rows[i][c2] - sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

/// Rank of the row span.
pub fn rank(rows: &[VecQ]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.iter().map(|v| v.coords().to_vec()).collect();
    row_reduce(&mut m).len()
}

/// Basis of the right null space of the matrix whose rows are `rows`.
pub fn nullspace(rows: &[VecQ], dim: usize) -> Vec<VecQ> {
    let mut m: Vec<Vec<Rational>> = rows.iter().map(|v| v.coords().to_vec()).collect();
    if m.is_empty() {
        m.push(vec![rat_int(0); dim]);
    }
    let pivots = row_reduce(&mut m);
    let free: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::new();
    for &f in &free {
        let mut v = vec![rat_int(0); dim];
        v[f] = rat_int(1);
        for (ri, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[ri][f].clone();
        }
        basis.push(VecQ::new(v));
    }
    basis
}

/// Unique solution of `sum_i x_i * cols[i] = target` when the columns are
/// linearly independent and the system is consistent; `None` otherwise.
pub fn solve_columns(cols: &[VecQ], target: &VecQ) -> Option<Vec<Rational>> {
    let dim = target.dim();
    let n = cols.len();
    let mut m: Vec<Vec<Rational>> = (0..dim)
        .map(|r| {
            let mut row: Vec<Rational> = cols.iter().map(|c| c.get(r).clone()).collect();
            row.push(target.get(r).clone());
            row
        })
        .collect();
    let pivots = row_reduce(&mut m);
    // Independent columns: every unknown is a pivot and the target column is not.
    if pivots.len() != n || pivots.contains(&n) {
        return None;
    }
    // Consistency: no row reduces to 0 = nonzero.
    for row in &m {
        if row[..n].iter().all(|x| x.is_zero()) && !row[n].is_zero() {
            return None;
        }
    }
    let mut sol = vec![rat_int(0); n];
    for (ri, &pc) in pivots.iter().enumerate() {
        sol[pc] = m[ri][n].clone();
    }
    Some(sol)
}

/// Dimension of the affine hull of `points`.
pub fn affine_dim(points: &[VecQ]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let diffs: Vec<VecQ> = points[1..].iter().map(|p| p.sub(&points[0])).collect();
    rank(&diffs)
}

// ---------------------------------------------------------------------------
// Facets and polytopes.
// ---------------------------------------------------------------------------

/// Halfspace `<normal, x> <= offset`, canonicalized so the first nonzero
/// normal coordinate has absolute value 1. The sign is geometric and is never
/// flipped by canonicalization.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Facet {
    normal: VecQ,
    offset: Rational,
}

impl Facet {
    pub fn new(normal: VecQ, offset: Rational) -> Self {
        let lead = normal
            .coords()
            .iter()
            .find(|c| !c.is_zero())
            .expect("facet normal must be nonzero")
            .abs();
        if lead.is_one() {
            return Facet { normal, offset };
        }
        Facet {
            normal: normal.scale(&(rat_int(1) / lead.clone())),
            offset: offset / lead,
        }
    }

    pub fn normal(&self) -> &VecQ {
        &self.normal
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    /// `<normal, p> - offset`; zero on the hyperplane, negative inside.
    pub fn eval(&self, p: &VecQ) -> Rational {
        self.normal.dot(p) - self.offset.clone()
    }

    pub fn satisfied_by(&self, p: &VecQ) -> bool {
        self.eval(p) <= rat_int(0)
    }

    pub fn contains(&self, p: &VecQ) -> bool {
        self.eval(p).is_zero()
    }
}

impl fmt::Display for Facet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} . x <= {}", self.normal, fmt_rat(&self.offset))
    }
}

/// Value of the Minkowski gauge `min { lambda >= 0 | v in lambda P }`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Norm {
    Finite(Rational),
    Infinite,
}

impl Norm {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Norm::Finite(r) => Some(r),
            Norm::Infinite => None,
        }
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Norm::Finite(r) => write!(f, "{}", fmt_rat(r)),
            Norm::Infinite => write!(f, "inf"),
        }
    }
}

/// A full-dimensional convex polytope with exact vertex and facet lists, both
/// irredundant and canonically sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolytopeQ {
    dim: usize,
    vertices: Vec<VecQ>,
    facets: Vec<Facet>,
}

impl PolytopeQ {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[VecQ] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn facet(&self, i: usize) -> &Facet {
        &self.facets[i]
    }

    /// Membership by the facet inequalities.
    pub fn contains(&self, p: &VecQ) -> bool {
        p.dim() == self.dim && self.facets.iter().all(|f| f.satisfied_by(p))
    }

    /// Indices of the facets whose hyperplane contains `p`.
    ///
    /// Empty exactly when `p` is interior. A point on a ridge is reported on
    /// every adjacent facet.
    pub fn facets_containing(&self, p: &VecQ) -> Result<Vec<usize>, GeomError> {
        if !self.contains(p) {
            return Err(GeomError::PointOutside);
        }
        Ok((0..self.facets.len())
            .filter(|&i| self.facets[i].contains(p))
            .collect())
    }

    /// Whether some proper face contains both points.
    ///
    /// For points of a full-dimensional polytope this is equivalent to lying
    /// on a common facet: every proper face is contained in a facet, so the
    /// face-based and facet-based readings of the criterion coincide.
    pub fn on_common_face(&self, p: &VecQ, q: &VecQ) -> Result<bool, GeomError> {
        let fp = self.facets_containing(p)?;
        let fq = self.facets_containing(q)?;
        Ok(fp.iter().any(|i| fq.contains(i)))
    }

    /// `min { lambda >= 0 | v in lambda P }`, computed over the facet
    /// representation. Requires `0 in P`; infinite when `0` sits on a facet
    /// whose open side contains `v`.
    pub fn minkowski_norm(&self, v: &VecQ) -> Result<Norm, GeomError> {
        if v.dim() != self.dim {
            return Err(GeomError::DimensionMismatch {
                expected: self.dim,
                got: v.dim(),
            });
        }
        if self.facets.iter().any(|f| f.offset.is_negative()) {
            return Err(GeomError::OriginOutside);
        }
        let mut best = rat_int(0);
        for f in &self.facets {
            let num = f.normal.dot(v);
            if f.offset.is_zero() {
                if num.is_positive() {
                    return Ok(Norm::Infinite);
                }
                continue;
            }
            let lam = num / f.offset.clone();
            if lam > best {
                best = lam;
            }
        }
        Ok(Norm::Finite(best))
    }
}

/// Exact convex hull of `points` in ambient dimension `dim`.
///
/// Errors with [`GeomError::DegeneratePolytope`] when the affine hull is not
/// full-dimensional; lower-dimensional hulls are deliberately not projected,
/// callers decide what a degenerate configuration means.
pub fn convex_hull(points: &[VecQ], dim: usize) -> Result<PolytopeQ, GeomError> {
    if points.is_empty() {
        return Err(GeomError::EmptyPoints);
    }
    for p in points {
        if p.dim() != dim {
            return Err(GeomError::DimensionMismatch {
                expected: dim,
                got: p.dim(),
            });
        }
    }
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();

    let adim = affine_dim(&pts);
    if adim < dim {
        return Err(GeomError::DegeneratePolytope {
            affine_dim: adim,
            expected: dim,
        });
    }

    // Every facet hyperplane passes through dim affinely independent input
    // points; enumerate the subsets and keep the supporting hyperplanes.
    let mut facets: Vec<Facet> = Vec::new();
    let mut subset = vec![0usize; dim];
    enumerate_subsets(pts.len(), dim, &mut subset, 0, 0, &mut |idx| {
        let base = &pts[idx[0]];
        let diffs: Vec<VecQ> = idx[1..].iter().map(|&i| pts[i].sub(base)).collect();
        let ns = nullspace(&diffs, dim);
        if ns.len() != 1 {
            return; // affinely dependent subset; the hyperplane is not unique
        }
        let normal = ns.into_iter().next().unwrap();
        let offset = normal.dot(base);
        let mut above = false;
        let mut below = false;
        for p in &pts {
            match normal.dot(p).cmp(&offset) {
                Ordering::Greater => above = true,
                Ordering::Less => below = true,
                Ordering::Equal => {}
            }
            if above && below {
                return;
            }
        }
        if !above {
            facets.push(Facet::new(normal, offset));
        } else {
            facets.push(Facet::new(normal.neg(), -offset));
        }
    });
    facets.sort();
    facets.dedup();

    // A point of the hull is a vertex iff its active facet normals span the
    // whole space.
    let mut vertices: Vec<VecQ> = pts
        .iter()
        .filter(|p| {
            let active: Vec<VecQ> = facets
                .iter()
                .filter(|f| f.contains(p))
                .map(|f| f.normal.clone())
                .collect();
            active.len() >= dim && rank(&active) == dim
        })
        .cloned()
        .collect();
    vertices.sort();

    debug_assert!(vertices
        .iter()
        .all(|v| facets.iter().all(|f| f.satisfied_by(v))));
    debug_assert!(facets.iter().all(|f| {
        let on: Vec<VecQ> = vertices.iter().filter(|v| f.contains(v)).cloned().collect();
        on.len() >= dim && affine_dim(&on) == dim - 1
    }));

    Ok(PolytopeQ {
        dim,
        vertices,
        facets,
    })
}

fn enumerate_subsets(
    n: usize,
    k: usize,
    buf: &mut Vec<usize>,
    depth: usize,
    start: usize,
    emit: &mut impl FnMut(&[usize]),
) {
    if depth == k {
        emit(buf);
        return;
    }
    for i in start..n {
        buf[depth] = i;
        enumerate_subsets(n, k, buf, depth + 1, i + 1, emit);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn v(coords: &[i64]) -> VecQ {
        VecQ::from_ints(coords)
    }

    fn square() -> PolytopeQ {
        convex_hull(
            &[v(&[1, 1]), v(&[-1, -1]), v(&[0, 0]), v(&[-1, 1]), v(&[1, -1])],
            2,
        )
        .unwrap()
    }

    #[test]
    fn hull_square() {
        let p = square();
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.facets().len(), 4);
        assert!(p.vertices().contains(&v(&[1, 1])));
        assert!(p.vertices().contains(&v(&[-1, -1])));
        assert!(!p.vertices().contains(&v(&[0, 0])));
    }

    #[test]
    fn hull_collinear_is_degenerate() {
        let err = convex_hull(&[v(&[0, 0]), v(&[1, 0])], 2).unwrap_err();
        assert_eq!(
            err,
            GeomError::DegeneratePolytope {
                affine_dim: 1,
                expected: 2
            }
        );
    }

    #[test]
    fn hull_hexagon() {
        let pts = [
            v(&[1, 0]),
            v(&[0, 1]),
            v(&[-1, -1]),
            v(&[-1, 0]),
            v(&[0, -1]),
            v(&[1, 1]),
        ];
        let p = convex_hull(&pts, 2).unwrap();
        assert_eq!(p.vertices().len(), 6);
        assert_eq!(p.facets().len(), 6);
        for q in &pts {
            assert!(p.vertices().contains(q));
        }
    }

    #[test]
    fn hull_dim1_segment() {
        let p = convex_hull(&[v(&[-2]), v(&[5]), v(&[0])], 1).unwrap();
        assert_eq!(p.vertices(), &[v(&[-2]), v(&[5])]);
        assert_eq!(p.facets().len(), 2);
        assert!(p.contains(&v(&[3])));
        assert!(!p.contains(&v(&[6])));
    }

    #[test]
    fn hull_dim3_octahedron() {
        let pts = [
            v(&[1, 0, 0]),
            v(&[-1, 0, 0]),
            v(&[0, 1, 0]),
            v(&[0, -1, 0]),
            v(&[0, 0, 1]),
            v(&[0, 0, -1]),
            v(&[0, 0, 0]),
        ];
        let p = convex_hull(&pts, 3).unwrap();
        assert_eq!(p.vertices().len(), 6);
        assert_eq!(p.facets().len(), 8);
        // Vertex (1,0,0) sits on four facets; the ridge rule counts them all.
        assert_eq!(p.facets_containing(&v(&[1, 0, 0])).unwrap().len(), 4);
    }

    #[test]
    fn minkowski_norm_square() {
        let p = square();
        assert_eq!(
            p.minkowski_norm(&v(&[24, 0])).unwrap(),
            Norm::Finite(rat_int(24))
        );
        assert_eq!(
            p.minkowski_norm(&v(&[0, 0])).unwrap(),
            Norm::Finite(rat_int(0))
        );
    }

    #[test]
    fn minkowski_norm_triangle() {
        let p = convex_hull(&[v(&[1, 0]), v(&[0, 1]), v(&[-1, -1])], 2).unwrap();
        assert_eq!(
            p.minkowski_norm(&v(&[1, 1])).unwrap(),
            Norm::Finite(rat_int(2))
        );
    }

    #[test]
    fn minkowski_norm_origin_outside() {
        let p = convex_hull(&[v(&[1, 1]), v(&[2, 1]), v(&[1, 2])], 2).unwrap();
        assert_eq!(
            p.minkowski_norm(&v(&[1, 1])).unwrap_err(),
            GeomError::OriginOutside
        );
    }

    #[test]
    fn minkowski_norm_boundary_origin_infinite() {
        // 0 is a vertex here, so directions into the opposite open halfplane
        // have infinite gauge.
        let p = convex_hull(&[v(&[0, 0]), v(&[1, 0]), v(&[0, 1])], 2).unwrap();
        assert_eq!(p.minkowski_norm(&v(&[-1, -1])).unwrap(), Norm::Infinite);
        assert_eq!(
            p.minkowski_norm(&v(&[1, 1])).unwrap(),
            Norm::Finite(rat_int(2))
        );
    }

    #[test]
    fn facets_containing_square() {
        let p = square();
        assert_eq!(p.facets_containing(&v(&[1, 1])).unwrap().len(), 2);
        assert_eq!(p.facets_containing(&v(&[0, 0])).unwrap().len(), 0);
        assert_eq!(p.facets_containing(&v(&[1, 0])).unwrap().len(), 1);
        assert_eq!(
            p.facets_containing(&v(&[2, 0])).unwrap_err(),
            GeomError::PointOutside
        );
    }

    #[test]
    fn common_face_cases() {
        let diamond =
            convex_hull(&[v(&[1, 0]), v(&[-1, 0]), v(&[0, 1]), v(&[0, -1])], 2).unwrap();
        assert!(diamond.on_common_face(&v(&[1, 0]), &v(&[0, 1])).unwrap());
        let p = square();
        assert!(!p.on_common_face(&v(&[1, 1]), &v(&[-1, -1])).unwrap());
        // p == q on the boundary shares whatever facet contains it.
        assert!(p.on_common_face(&v(&[1, 0]), &v(&[1, 0])).unwrap());
        assert!(!p.on_common_face(&v(&[0, 0]), &v(&[0, 0])).unwrap());
    }

    #[test]
    fn facet_canonical_form() {
        let f = Facet::new(VecQ::new(vec![rat(4, 1), rat(-2, 1)]), rat_int(8));
        assert_eq!(f.normal(), &VecQ::new(vec![rat_int(1), rat(-1, 2)]));
        assert_eq!(f.offset(), &rat_int(2));
        let g = Facet::new(VecQ::new(vec![rat(-2, 1), rat(1, 1)]), rat_int(-4));
        assert_eq!(g.normal(), &VecQ::new(vec![rat_int(-1), rat(1, 2)]));
    }

    #[test]
    fn solve_columns_basics() {
        let cols = [v(&[1, 0]), v(&[1, 1])];
        let sol = solve_columns(&cols, &v(&[3, 2])).unwrap();
        assert_eq!(sol, vec![rat_int(1), rat_int(2)]);
        // Dependent columns are rejected.
        assert!(solve_columns(&[v(&[1, 1]), v(&[2, 2])], &v(&[1, 1])).is_none());
        // Inconsistent system.
        assert!(solve_columns(&[v(&[1, 0])], &v(&[1, 1])).is_none());
    }
}
