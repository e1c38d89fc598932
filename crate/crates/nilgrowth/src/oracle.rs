//! Brute-force reference implementations over the vertex representation.
//!
//! These deliberately avoid the facet machinery in [`crate::geom`]: they solve
//! small exact linear systems over vertex subsets, so the test suites can
//! check the two representations against each other.

use crate::geom::{solve_columns, Norm, VecQ};
use crate::rat::{rat_int, Rational};
use num_traits::Signed;

/// `min { lambda >= 0 | v in lambda * conv(vertices) }` by enumerating basic
/// solutions: writing `v = sum nu_i V_i` with `nu >= 0` and `lambda = sum nu`,
/// some optimum uses at most `dim` linearly independent vertices, so trying
/// every such subset and solving exactly finds it. `Infinite` when `v` is not
/// in the cone spanned by the vertices.
pub fn lp_minkowski_norm(vertices: &[VecQ], v: &VecQ) -> Norm {
    if v.is_zero() {
        return Norm::Finite(rat_int(0));
    }
    let dim = v.dim();
    let mut best: Option<Rational> = None;
    let mut subset = Vec::new();
    subsets_up_to(vertices.len(), dim, &mut subset, 0, &mut |idx| {
        let cols: Vec<VecQ> = idx.iter().map(|&i| vertices[i].clone()).collect();
        let Some(nu) = solve_columns(&cols, v) else {
            return;
        };
        if nu.iter().any(|x| x.is_negative()) {
            return;
        }
        let lambda = nu.into_iter().fold(rat_int(0), |a, b| a + b);
        if best.as_ref().is_none_or(|b| lambda < *b) {
            best = Some(lambda);
        }
    });
    match best {
        Some(l) => Norm::Finite(l),
        None => Norm::Infinite,
    }
}

/// Exact membership in `conv(vertices)` by Caratheodory: `p` is a convex
/// combination of the vertices iff it is one of at most `dim + 1` affinely
/// independent vertices, i.e. the homogenized system has a nonnegative basic
/// solution.
pub fn lp_contains(vertices: &[VecQ], p: &VecQ) -> bool {
    let dim = p.dim();
    let lift = |q: &VecQ| {
        let mut c = q.coords().to_vec();
        c.push(rat_int(1));
        VecQ::new(c)
    };
    let target = lift(p);
    let lifted: Vec<VecQ> = vertices.iter().map(lift).collect();
    let mut found = false;
    let mut subset = Vec::new();
    subsets_up_to(vertices.len(), dim + 1, &mut subset, 0, &mut |idx| {
        if found {
            return;
        }
        let cols: Vec<VecQ> = idx.iter().map(|&i| lifted[i].clone()).collect();
        if let Some(mu) = solve_columns(&cols, &target) {
            if mu.iter().all(|x| !x.is_negative()) {
                found = true;
            }
        }
    });
    found
}

fn subsets_up_to(
    n: usize,
    max_k: usize,
    buf: &mut Vec<usize>,
    start: usize,
    emit: &mut impl FnMut(&[usize]),
) {
    if !buf.is_empty() {
        emit(buf);
    }
    if buf.len() == max_k {
        return;
    }
    for i in start..n {
        buf.push(i);
        subsets_up_to(n, max_k, buf, i + 1, emit);
        buf.pop();
    }
}
