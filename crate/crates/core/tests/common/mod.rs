#![allow(dead_code)]

use jkscatter::exact::{int, frac};
use jkscatter::{LinForm, Rational, RationalExpr};
use proptest::prelude::*;

pub fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| frac(n, d))
}

pub fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (1i64..=9, 1i64..=5, any::<bool>()).prop_map(|(n, d, neg)| frac(if neg { -n } else { n }, d))
}

/// Affine form in variables `0..n` with small integer data.
pub fn form(n: usize) -> impl Strategy<Value = LinForm> {
    (prop::collection::vec(-2i64..=2, n), -2i64..=2)
        .prop_filter("nonconstant", |(c, _)| c.iter().any(|&x| x != 0))
        .prop_map(|(c, k)| LinForm::new(c.into_iter().enumerate().map(|(i, x)| (i, int(x))), int(k)))
}

/// Products of up to four affine factors with exponents in `-3..=2`.
pub fn expr(n: usize) -> impl Strategy<Value = RationalExpr> {
    (nonzero_rational(), prop::collection::vec((form(n), -3i32..=2), 1..=4))
        .prop_map(|(s, fs)| RationalExpr::from_factors(s, fs).unwrap())
}

use jkscatter::arrangement::{regularity, RegularityMode};
use rand::Rng;

/// Homogeneous poles along random integer covectors, times a unit factor.
pub struct RandomArrangement {
    pub elements: Vec<Vec<Rational>>,
    pub f: RationalExpr,
}

pub fn random_arrangement<R: Rng>(rng: &mut R, n: usize) -> RandomArrangement {
    let count = rng.gen_range(n..=n + 2);
    let mut elements: Vec<Vec<Rational>> = Vec::new();
    while elements.len() < count {
        let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
        let g = v.iter().fold(0i64, |a, &b| num_integer::gcd(a, b));
        if g == 0 {
            continue;
        }
        let v: Vec<Rational> = v.iter().map(|&x| int(x / g)).collect();
        if elements.iter().any(|e| e == &v || e.iter().zip(&v).all(|(a, b)| *a == -b.clone())) {
            continue;
        }
        elements.push(v);
    }
    if jkscatter::exact::linalg::rank(&elements) < n {
        return random_arrangement(rng, n);
    }
    let mut factors: Vec<(LinForm, i32)> = elements
        .iter()
        .map(|e| (LinForm::from_dense(e), -rng.gen_range(1..=2)))
        .collect();
    let unit: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
    factors.push((LinForm::from_dense(&ints(&unit)).with_constant(int(rng.gen_range(1..=3))), rng.gen_range(-1..=1)));
    let f = RationalExpr::from_factors(frac(rng.gen_range(1..=5), rng.gen_range(1..=3)), factors).unwrap();
    RandomArrangement { elements, f }
}

pub fn random_zeta<R: Rng>(rng: &mut R, n: usize) -> Vec<Rational> {
    (0..n).map(|_| frac(rng.gen_range(-40..=40), rng.gen_range(1..=7))).collect()
}

pub fn sum_regular(zeta: &[Rational], elements: &[Vec<Rational>]) -> bool {
    regularity(zeta, elements, zeta.len(), RegularityMode::Sum).is_none()
}

/// Planar chambers: same side of every element line.
pub fn same_chamber_2d(elements: &[Vec<Rational>], a: &[Rational], b: &[Rational]) -> bool {
    elements.iter().all(|e| {
        let da = &e[0] * &a[1] - &e[1] * &a[0];
        let db = &e[0] * &b[1] - &e[1] * &b[0];
        jkscatter::exact::sign(&da) == jkscatter::exact::sign(&db) && jkscatter::exact::sign(&da) != 0
    })
}

pub fn identity(n: usize) -> Vec<Vec<Rational>> {
    (0..n).map(|i| (0..n).map(|j| int((i == j) as i64)).collect()).collect()
}

/// `dmu` with its first row negated.
pub fn flipped(n: usize) -> Vec<Vec<Rational>> {
    let mut m = identity(n);
    m[0][0] = int(-1);
    m
}
