use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};

use super::{Rational, Var};

/// Affine form `sum_v c_v * u_v + constant`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinForm {
    coeffs: BTreeMap<Var, Rational>,
    constant: Rational,
}

impl LinForm {
    pub fn new(coeffs: impl IntoIterator<Item = (Var, Rational)>, constant: Rational) -> Self {
        let mut l = LinForm { coeffs: BTreeMap::new(), constant };
        for (v, c) in coeffs {
            let next = l.coeff(v) + c;
            l.set_coeff(v, next);
        }
        l
    }

    pub fn var(v: Var) -> Self {
        LinForm::new([(v, Rational::one())], Rational::zero())
    }

    pub fn constant_form(c: Rational) -> Self {
        LinForm { coeffs: BTreeMap::new(), constant: c }
    }

    /// Linear form from a dense coefficient vector indexed by variable.
    pub fn from_dense(v: &[Rational]) -> Self {
        LinForm::new(v.iter().cloned().enumerate(), Rational::zero())
    }

    pub fn coeffs(&self) -> &BTreeMap<Var, Rational> {
        &self.coeffs
    }

    pub fn coeff(&self, v: Var) -> Rational {
        self.coeffs.get(&v).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn set_coeff(&mut self, v: Var, c: Rational) {
        if c.is_zero() {
            self.coeffs.remove(&v);
        } else {
            self.coeffs.insert(v, c);
        }
    }

    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    pub fn with_constant(mut self, c: Rational) -> Self {
        self.constant = c;
        self
    }

    pub fn linear_part(&self) -> LinForm {
        LinForm { coeffs: self.coeffs.clone(), constant: Rational::zero() }
    }

    pub fn dense(&self, n: usize) -> Vec<Rational> {
        (0..n).map(|v| self.coeff(v)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.constant.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.coeffs.keys().copied().collect()
    }

    pub fn add(&self, other: &LinForm) -> LinForm {
        let mut out = self.clone();
        for (v, c) in &other.coeffs {
            out.set_coeff(*v, out.coeff(*v) + c);
        }
        out.constant += &other.constant;
        out
    }

    pub fn sub(&self, other: &LinForm) -> LinForm {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> LinForm {
        if c.is_zero() {
            return LinForm::default();
        }
        LinForm {
            coeffs: self.coeffs.iter().map(|(v, x)| (*v, x * c)).collect(),
            constant: &self.constant * c,
        }
    }

    pub fn eval(&self, point: &dyn Fn(Var) -> Rational) -> Rational {
        self.coeffs.iter().map(|(v, c)| c * point(*v)).sum::<Rational>() + &self.constant
    }

    /// Simultaneous substitution of variables by affine forms; unmapped variables are kept.
    pub fn substitute(&self, map: &BTreeMap<Var, LinForm>) -> LinForm {
        let mut out = LinForm::constant_form(self.constant.clone());
        for (v, c) in &self.coeffs {
            match map.get(v) {
                Some(l) => out = out.add(&l.scale(c)),
                None => out.set_coeff(*v, out.coeff(*v) + c),
            }
        }
        out
    }

    /// Splits as `scale * monic` where the leading (first nonzero) coefficient of `monic` is 1.
    /// For a constant form the constant itself is the leading coefficient.
    pub fn normalize(&self) -> (Rational, LinForm) {
        let lead = match self.coeffs.values().next() {
            Some(c) => c.clone(),
            None => self.constant.clone(),
        };
        if lead.is_zero() {
            return (Rational::zero(), LinForm::default());
        }
        (lead.clone(), self.scale(&lead.recip()))
    }
}

impl fmt::Display for LinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}*u{v}")?;
        }
        if first || !self.constant.is_zero() {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{}", self.constant)?;
        }
        Ok(())
    }
}
