//! Exact rational substrate: polynomials, affine forms, factored rational
//! functions, iterated residues and truncated power series.

mod expr;
pub mod linalg;
mod linform;
mod poly;
mod residue;
mod series;

pub use expr::RationalExpr;
pub use linform::LinForm;
pub use poly::{Monomial, Poly};
pub use residue::{change_vars_linear, iterated_residue, pullback_linear, residue_step};
pub use series::{SeriesMonomial, TruncatedSeries};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

/// Variable identifier.
pub type Var = usize;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Formats as `p/q`, always with an explicit denominator.
pub fn fmt_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `p/q`, `p` or a signed variant of either. Accepts a leading unicode minus.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim().replace('\u{2212}', "-");
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<BigInt>().ok()?, d.trim().parse::<BigInt>().ok()?),
        None => (s.parse::<BigInt>().ok()?, BigInt::one()),
    };
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

pub fn sign(q: &Rational) -> i32 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

/// Generalized binomial coefficient `e choose k` for any integer `e`.
pub fn binomial(e: i64, k: u32) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k as i64 {
        acc = acc * int(e - i) / int(i + 1);
    }
    acc
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}
