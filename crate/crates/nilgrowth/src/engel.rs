//! The Engel group modeled on plane paths.
//!
//! An element is an equivalence class of paths from the origin, remembered by
//! three exact invariants: the endpoint `(x, y)`, the signed area swept by the
//! closed-up path, and the first moment of that area in `y` (the barycenter
//! moment). Concatenation has a closed form on these invariants, which is the
//! group law below. The standard lattice is generated by the diagonal
//! segments `a` to `(1,1)` and `b` to `(1,-1)`.

use crate::geom::VecQ;
use crate::rat::{fmt_rat, rat_int, Rational};
use std::fmt;

/// A path class `(x, y, A, B_y)` with exact rational invariants.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EngelElement {
    pub x: Rational,
    pub y: Rational,
    pub area: Rational,
    pub moment: Rational,
}

impl EngelElement {
    pub fn new(x: Rational, y: Rational, area: Rational, moment: Rational) -> Self {
        EngelElement { x, y, area, moment }
    }

    pub fn from_ints(x: i64, y: i64, area: i64, moment: i64) -> Self {
        EngelElement::new(rat_int(x), rat_int(y), rat_int(area), rat_int(moment))
    }

    pub fn identity() -> Self {
        EngelElement::from_ints(0, 0, 0, 0)
    }

    /// Segment to `(1, 1)`.
    pub fn gen_a() -> Self {
        EngelElement::from_ints(1, 1, 0, 0)
    }

    /// Segment to `(1, -1)`.
    pub fn gen_b() -> Self {
        EngelElement::from_ints(1, -1, 0, 0)
    }

    pub fn is_identity(&self) -> bool {
        self == &EngelElement::identity()
    }

    /// Concatenation of path classes:
    /// endpoint adds, the area gains the triangle `(0, g_hat, g_hat + h_hat)`,
    /// and the moment gains the translated copy of `h` plus the triangle's
    /// first moment (centroid height `(2 y_g + y_h) / 3`).
    pub fn mul(&self, other: &EngelElement) -> EngelElement {
        let half_det =
            (&self.x * &other.y - &self.y * &other.x) / rat_int(2);
        let area = &self.area + &other.area + &half_det;
        let moment = &self.moment
            + &other.moment
            + &self.y * &other.area
            + (&self.y * rat_int(2) + &other.y) / rat_int(3) * &half_det;
        EngelElement::new(&self.x + &other.x, &self.y + &other.y, area, moment)
    }

    /// Reverse path: `(-x, -y, -A, yA - B_y)`, the unique solution of
    /// `g * g^-1 = e` under the product law.
    pub fn inv(&self) -> EngelElement {
        EngelElement::new(
            -self.x.clone(),
            -self.y.clone(),
            -self.area.clone(),
            &self.y * &self.area - &self.moment,
        )
    }

    /// Reflection across the y-axis, an order-2 automorphism:
    /// `(x, y, A, B_y) -> (-x, y, -A, -B_y)`.
    pub fn reflect(&self) -> EngelElement {
        EngelElement::new(
            -self.x.clone(),
            self.y.clone(),
            -self.area.clone(),
            -self.moment.clone(),
        )
    }

    pub fn pow(&self, n: u64) -> EngelElement {
        let mut acc = EngelElement::identity();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }
}

impl fmt::Display for EngelElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "x={} y={} area={} moment={}",
            fmt_rat(&self.x),
            fmt_rat(&self.y),
            fmt_rat(&self.area),
            fmt_rat(&self.moment)
        )
    }
}

/// Exact membership test for the lattice generated by `a` and `b`.
///
/// In the rotated coordinates `u = (x+y)/2`, `v = (x-y)/2` the letters become
/// unit steps of `Z^2`, so endpoints must have `u, v` integral, and every
/// closed word encloses even area (a closed unit-step loop has integer area
/// and `dx dy = 2 du dv`). The commutator subgroup works out to exactly
/// `{(0,0,2i,2j)}`: conjugating `[a,b] = (0,0,-2,0)` by an element with
/// height `y` gives `(0,0,-2,-2y)`, and `[a,[a,b]] = (0,0,0,-2)`. Since the
/// abelianization is torsion-free, an element lies in the lattice iff it is
/// congruent to the reference `a^u b^v` modulo that subgroup:
///
///   (x, y, A, B) in E  <=>  u, v in Z,  A + u v in 2Z,
///                           B + u v (2u - v)/3 in 2Z.
pub fn lattice_contains(g: &EngelElement) -> bool {
    let two = rat_int(2);
    let u = (&g.x + &g.y) / &two;
    let v = (&g.x - &g.y) / &two;
    if !u.is_integer() || !v.is_integer() {
        return false;
    }
    let ref_area = -(&u * &v);
    let ref_moment = &ref_area * (&u * &two - &v) / rat_int(3);
    let even = |r: Rational| r.is_integer() && (r / &two).is_integer();
    even(&g.area - ref_area) && even(&g.moment - ref_moment)
}

/// A polygonal path from the origin with exact vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polyline {
    points: Vec<VecQ>,
}

impl Polyline {
    /// Points must start at the origin and consecutive points must differ.
    pub fn new(points: Vec<VecQ>) -> Self {
        assert!(!points.is_empty(), "polyline needs at least the origin");
        assert!(points[0].is_zero(), "polyline must start at (0, 0)");
        assert!(points.iter().all(|p| p.dim() == 2));
        assert!(
            points.windows(2).all(|w| w[0] != w[1]),
            "consecutive polyline points must be distinct"
        );
        Polyline { points }
    }

    /// Build from integer steps, accumulating from the origin.
    pub fn from_steps(steps: &[(i64, i64)]) -> Self {
        let mut pts = vec![VecQ::from_ints(&[0, 0])];
        let (mut x, mut y) = (0i64, 0i64);
        for &(dx, dy) in steps {
            x += dx;
            y += dy;
            pts.push(VecQ::from_ints(&[x, y]));
        }
        Polyline::new(pts)
    }

    pub fn points(&self) -> &[VecQ] {
        &self.points
    }
}

/// Independent oracle for the path invariants: close the polyline back to the
/// origin and integrate the winding-number field directly. The shoelace sum
/// gives the signed (winding-weighted) area, and the matching first-moment
/// sum gives `B_y`:
///
///   A   = 1/2 sum (x_i y_{i+1} - x_{i+1} y_i)
///   B_y = 1/6 sum (y_i + y_{i+1})(x_i y_{i+1} - x_{i+1} y_i)
///
/// both over the closed polygon, counterclockwise positive.
pub fn winding_oracle(p: &Polyline) -> EngelElement {
    let pts = p.points();
    let last = pts.last().unwrap();
    let mut area2 = rat_int(0); // 2A
    let mut moment6 = rat_int(0); // 6B_y
    let n = pts.len();
    for i in 0..n {
        let (p0, p1) = (&pts[i], &pts[(i + 1) % n]);
        if p0 == p1 {
            continue; // closing edge of an already-closed path
        }
        let cross = p0.get(0) * p1.get(1) - p1.get(0) * p0.get(1);
        area2 += &cross;
        moment6 += (p0.get(1) + p1.get(1)) * cross;
    }
    EngelElement::new(
        last.get(0).clone(),
        last.get(1).clone(),
        area2 / rat_int(2),
        moment6 / rat_int(6),
    )
}
