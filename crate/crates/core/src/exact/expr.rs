use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};

use super::{LinForm, Poly, Rational, Var};
use crate::error::{Error, Result};

/// `numer * prod_i factors[i].0 ^ factors[i].1`.
///
/// Factors are non-constant monic affine forms with nonzero exponents, so
/// proportional forms are always merged into one entry. A constant numerator
/// plays the role of the scalar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalExpr {
    numer: Poly,
    factors: BTreeMap<LinForm, i32>,
}

impl RationalExpr {
    pub fn zero() -> Self {
        RationalExpr { numer: Poly::zero(), factors: BTreeMap::new() }
    }

    pub fn one() -> Self {
        RationalExpr::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        RationalExpr { numer: Poly::constant(c), factors: BTreeMap::new() }
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalExpr { numer: p, factors: BTreeMap::new() }
    }

    /// `scalar * prod l^e`. Fails if a vanishing form carries a negative exponent.
    pub fn from_factors(
        scalar: Rational,
        factors: impl IntoIterator<Item = (LinForm, i32)>,
    ) -> Result<Self> {
        let mut out = RationalExpr::constant(scalar);
        for (l, e) in factors {
            out.push_factor(&l, e)?;
        }
        Ok(out)
    }

    pub fn linear(l: &LinForm) -> Self {
        RationalExpr::from_factors(Rational::one(), [(l.clone(), 1)]).expect("positive exponent")
    }

    pub fn numer(&self) -> &Poly {
        &self.numer
    }

    pub fn factors(&self) -> impl Iterator<Item = (&LinForm, i32)> {
        self.factors.iter().map(|(l, e)| (l, *e))
    }

    /// The scalar if the numerator is constant.
    pub fn scalar(&self) -> Option<Rational> {
        self.numer.as_constant()
    }

    pub fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.numer.is_zero() {
            return Some(Rational::zero());
        }
        if self.factors.is_empty() {
            self.numer.as_constant()
        } else {
            None
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut vs = self.numer.vars();
        for l in self.factors.keys() {
            vs.extend(l.vars());
        }
        vs
    }

    fn push_factor(&mut self, l: &LinForm, e: i32) -> Result<()> {
        if e == 0 {
            return Ok(());
        }
        let (c, m) = l.normalize();
        if c.is_zero() {
            if e < 0 {
                return Err(Error::ZeroDenominator);
            }
            *self = RationalExpr::zero();
            return Ok(());
        }
        self.numer = self.numer.scale(&pow_int(&c, e));
        if m.is_constant() {
            return Ok(());
        }
        let slot = self.factors.entry(m).or_insert(0);
        *slot += e;
        if *slot == 0 {
            self.factors.retain(|_, e| *e != 0);
        }
        Ok(())
    }

    pub fn mul(&self, other: &RationalExpr) -> RationalExpr {
        if self.is_zero() || other.is_zero() {
            return RationalExpr::zero();
        }
        let mut out = RationalExpr { numer: self.numer.mul(&other.numer), factors: self.factors.clone() };
        for (l, e) in &other.factors {
            let slot = out.factors.entry(l.clone()).or_insert(0);
            *slot += e;
        }
        out.factors.retain(|_, e| *e != 0);
        out
    }

    pub fn mul_factor(&self, l: &LinForm, e: i32) -> Result<RationalExpr> {
        let mut out = self.clone();
        if out.is_zero() {
            return Ok(out);
        }
        out.push_factor(l, e)?;
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> RationalExpr {
        if c.is_zero() {
            return RationalExpr::zero();
        }
        RationalExpr { numer: self.numer.scale(c), factors: self.factors.clone() }
    }

    pub fn neg(&self) -> RationalExpr {
        self.scale(&-Rational::one())
    }

    /// `self^e`; negative powers need a constant numerator.
    pub fn pow(&self, e: i32) -> Result<RationalExpr> {
        if e >= 0 {
            let mut out = RationalExpr { numer: self.numer.pow(e as u32), factors: BTreeMap::new() };
            for (l, k) in &self.factors {
                out.factors.insert(l.clone(), k * e);
            }
            out.factors.retain(|_, e| *e != 0);
            return Ok(out);
        }
        let c = self.numer.as_constant().ok_or_else(|| {
            Error::Invalid("negative power of a non-monomial numerator".into())
        })?;
        if c.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let mut out = RationalExpr::constant(pow_int(&c, e));
        for (l, k) in &self.factors {
            out.factors.insert(l.clone(), k * e);
        }
        Ok(out)
    }

    /// Numerator polynomial and denominator exponents (positive) after
    /// multiplying every positive-exponent factor into the numerator.
    fn as_fraction(&self) -> (Poly, BTreeMap<LinForm, i32>) {
        let mut numer = self.numer.clone();
        let mut den = BTreeMap::new();
        for (l, e) in &self.factors {
            if *e > 0 {
                numer = numer.mul(&Poly::from_linform(l).pow(*e as u32));
            } else {
                den.insert(l.clone(), -e);
            }
        }
        (numer, den)
    }

    /// Sum over the least common factored denominator, followed by cancellation.
    pub fn add(&self, other: &RationalExpr) -> RationalExpr {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (na, da) = self.as_fraction();
        let (nb, db) = other.as_fraction();
        let mut common = da.clone();
        for (l, e) in &db {
            let slot = common.entry(l.clone()).or_insert(0);
            *slot = (*slot).max(*e);
        }
        let lift = |n: Poly, d: &BTreeMap<LinForm, i32>| {
            let mut n = n;
            for (l, e) in &common {
                let missing = e - d.get(l).copied().unwrap_or(0);
                if missing > 0 {
                    n = n.mul(&Poly::from_linform(l).pow(missing as u32));
                }
            }
            n
        };
        let numer = lift(na, &da).add(&lift(nb, &db));
        let out = RationalExpr {
            numer,
            factors: common.into_iter().map(|(l, e)| (l, -e)).collect(),
        };
        out.cancel()
    }

    pub fn sub(&self, other: &RationalExpr) -> RationalExpr {
        self.add(&other.neg())
    }

    /// Divides denominator factors out of the numerator while they divide exactly.
    pub fn cancel(mut self) -> RationalExpr {
        if self.numer.is_zero() {
            return RationalExpr::zero();
        }
        let keys: Vec<LinForm> = self.factors.iter().filter(|(_, e)| **e < 0).map(|(l, _)| l.clone()).collect();
        for l in keys {
            while self.factors[&l] < 0 {
                if self.numer.as_constant().is_some() {
                    break;
                }
                match self.numer.div_linform(&l) {
                    Some(q) => {
                        self.numer = q;
                        *self.factors.get_mut(&l).unwrap() += 1;
                    }
                    None => break,
                }
            }
        }
        self.factors.retain(|_, e| *e != 0);
        self
    }

    /// Exact value at a point; fails if a denominator factor vanishes there.
    pub fn eval(&self, point: &dyn Fn(Var) -> Rational) -> Result<Rational> {
        let mut acc = self.numer.eval(point);
        for (l, e) in &self.factors {
            let x = l.eval(point);
            if x.is_zero() {
                if *e < 0 {
                    return Err(Error::ZeroDenominator);
                }
                return Ok(Rational::zero());
            }
            acc *= pow_int(&x, *e);
        }
        Ok(acc)
    }

    /// Simultaneous affine substitution of variables; unmapped variables are kept.
    pub fn substitute(&self, map: &BTreeMap<Var, LinForm>) -> Result<RationalExpr> {
        let mut out = RationalExpr::from_poly(self.numer.substitute(map));
        if out.is_zero() {
            return Ok(out);
        }
        for (l, e) in &self.factors {
            out.push_factor(&l.substitute(map), *e)?;
        }
        Ok(out)
    }

    /// Translation `u -> u + x`.
    pub fn translate(&self, x: &[Rational]) -> Result<RationalExpr> {
        let map = x
            .iter()
            .enumerate()
            .map(|(v, c)| (v, LinForm::var(v).with_constant(c.clone())))
            .collect();
        self.substitute(&map)
    }
}

pub(crate) fn pow_int(c: &Rational, e: i32) -> Rational {
    if e >= 0 {
        num_traits::pow(c.clone(), e as usize)
    } else {
        num_traits::pow(c.recip(), (-e) as usize)
    }
}

impl fmt::Display for RationalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.numer)?;
        for (l, e) in &self.factors {
            write!(f, " * ({l})^{e}")?;
        }
        Ok(())
    }
}
