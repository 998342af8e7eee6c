use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};

use super::{LinForm, Rational, Var};

/// Sorted `(variable, exponent)` pairs with positive exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0.iter().find(|(w, _)| *w == v).map_or(0, |(_, e)| *e)
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            match (self.0.get(i), other.0.get(j)) {
                (Some(a), Some(b)) if a.0 == b.0 => {
                    out.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
                (Some(a), Some(b)) if a.0 < b.0 => {
                    out.push(*a);
                    i += 1;
                }
                (Some(a), None) => {
                    out.push(*a);
                    i += 1;
                }
                (_, Some(b)) => {
                    out.push(*b);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Monomial(out)
    }

    /// Removes `v`, returning its exponent and the cofactor.
    pub fn split(&self, v: Var) -> (u32, Monomial) {
        let e = self.exponent(v);
        (e, Monomial(self.0.iter().copied().filter(|(w, _)| *w != v).collect()))
    }
}

/// Multivariate polynomial with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn var(v: Var) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::var(v), Rational::one());
        p
    }

    pub fn from_linform(l: &LinForm) -> Self {
        let mut p = Poly::constant(l.constant().clone());
        for (v, c) in l.coeffs() {
            p.add_term(Monomial::var(*v), c.clone());
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.0.iter().map(|(v, _)| *v)).collect()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn eval(&self, point: &dyn Fn(Var) -> Rational) -> Rational {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.0.iter().fold(c.clone(), |acc, (v, e)| {
                    acc * num_traits::pow(point(*v), *e as usize)
                })
            })
            .sum()
    }

    /// Simultaneous substitution of each variable by an affine form.
    /// Variables absent from the map are kept.
    pub fn substitute(&self, map: &BTreeMap<Var, LinForm>) -> Poly {
        let mut cache: BTreeMap<(Var, u32), Poly> = BTreeMap::new();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut term = Poly::constant(c.clone());
            for &(v, e) in &m.0 {
                let factor = cache
                    .entry((v, e))
                    .or_insert_with(|| match map.get(&v) {
                        Some(l) => Poly::from_linform(l).pow(e),
                        None => Poly { terms: [(Monomial(vec![(v, e)]), Rational::one())].into() },
                    })
                    .clone();
                term = term.mul(&factor);
            }
            out = out.add(&term);
        }
        out
    }

    /// Coefficients of the powers of `v`: `self = sum_k out[k] * v^k`.
    pub fn coefficients_in(&self, v: Var) -> Vec<Poly> {
        let mut out: Vec<Poly> = Vec::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split(v);
            let e = e as usize;
            if out.len() <= e {
                out.resize(e + 1, Poly::zero());
            }
            out[e].add_term(rest, c.clone());
        }
        out
    }

    pub fn mul_var_pow(&self, v: Var, e: u32) -> Poly {
        if e == 0 {
            return self.clone();
        }
        let vm = Monomial(vec![(v, e)]);
        Poly { terms: self.terms.iter().map(|(m, c)| (m.mul(&vm), c.clone())).collect() }
    }

    /// Exact quotient by a non-constant affine form, if it divides.
    pub fn div_linform(&self, l: &LinForm) -> Option<Poly> {
        let (&x, a) = l.coeffs().iter().next()?;
        let mut rest = l.clone();
        rest.set_coeff(x, Rational::zero());
        let rest = Poly::from_linform(&rest);
        let mut p = self.coefficients_in(x);
        let deg = p.len().checked_sub(1)?;
        let mut q = vec![Poly::zero(); deg];
        let inv = a.recip();
        for k in (1..=deg).rev() {
            let qk = p[k].scale(&inv);
            p[k - 1] = p[k - 1].sub(&rest.mul(&qk));
            q[k - 1] = qk;
        }
        if !p[0].is_zero() {
            return None;
        }
        let mut out = Poly::zero();
        for (k, qk) in q.into_iter().enumerate() {
            out = out.add(&qk.mul_var_pow(x, k as u32));
        }
        Some(out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (v, e) in &m.0 {
                if *e == 1 {
                    write!(f, "*u{v}")?;
                } else {
                    write!(f, "*u{v}^{e}")?;
                }
            }
        }
        Ok(())
    }
}
