//! Exact rational scalars.
//!
//! Every scalar quantity in this crate (lengths, areas, moments, norm values,
//! growth exponents) is a [`Rational`]. There is no floating point anywhere in
//! a verdict path. `BigRational` keeps values reduced with a positive
//! denominator, so equality and hashing are structural.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

pub type Rational = BigRational;

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Rational `n/d`. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    assert!(d != 0, "zero denominator");
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Canonical display: `p` when the denominator is 1, else `p/q`.
pub fn fmt_rat(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `p` or `p/q` (both arbitrary precision). `q` must be nonzero.
pub fn parse_rat(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
        Some((p, q)) => {
            let p = p.trim().parse::<BigInt>().ok()?;
            let q = q.trim().parse::<BigInt>().ok()?;
            if q == BigInt::from(0) {
                None
            } else {
                Some(BigRational::new(p, q))
            }
        }
    }
}
