use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::{binomial, int, Rational};
use crate::error::{Error, Result};

/// `prod_i p_i^params[i] * x^x * y^y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SeriesMonomial {
    pub params: Vec<u32>,
    pub x: i64,
    pub y: i64,
}

impl SeriesMonomial {
    pub fn degree(&self) -> u32 {
        self.params.iter().sum()
    }

    fn mul(&self, other: &SeriesMonomial) -> SeriesMonomial {
        SeriesMonomial {
            params: self.params.iter().zip(&other.params).map(|(a, b)| a + b).collect(),
            x: self.x + other.x,
            y: self.y + other.y,
        }
    }
}

/// Laurent polynomial in `x, y` over a polynomial ring in nilpotent-graded
/// parameters, truncated above parameter degree `cutoff`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    nparams: usize,
    cutoff: u32,
    terms: BTreeMap<SeriesMonomial, Rational>,
}

impl TruncatedSeries {
    pub fn zero(nparams: usize, cutoff: u32) -> Self {
        TruncatedSeries { nparams, cutoff, terms: BTreeMap::new() }
    }

    pub fn one(nparams: usize, cutoff: u32) -> Self {
        Self::monomial(nparams, cutoff, vec![0; nparams], 0, 0, Rational::one())
    }

    pub fn monomial(nparams: usize, cutoff: u32, params: Vec<u32>, x: i64, y: i64, c: Rational) -> Self {
        assert_eq!(params.len(), nparams, "parameter vector length");
        let mut s = Self::zero(nparams, cutoff);
        s.add_term(SeriesMonomial { params, x, y }, c);
        s
    }

    /// `c * p_i * x^x * y^y`.
    pub fn param_term(nparams: usize, cutoff: u32, i: usize, x: i64, y: i64, c: Rational) -> Self {
        let mut params = vec![0; nparams];
        params[i] = 1;
        Self::monomial(nparams, cutoff, params, x, y, c)
    }

    pub fn nparams(&self) -> usize {
        self.nparams
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SeriesMonomial, &Rational)> {
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

    pub fn coefficient(&self, m: &SeriesMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: SeriesMonomial, c: Rational) {
        if c.is_zero() || m.degree() > self.cutoff {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    /// Same terms, new cutoff (dropping anything above it).
    pub fn with_cutoff(&self, cutoff: u32) -> Self {
        let mut out = Self::zero(self.nparams, cutoff);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    /// Terms of parameter degree exactly `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        let mut out = Self::zero(self.nparams, self.cutoff);
        for (m, c) in &self.terms {
            if m.degree() == d {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.nparams, self.cutoff);
        if c.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect();
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nparams, self.cutoff.min(other.cutoff));
        let mut by_degree: Vec<Vec<(&SeriesMonomial, &Rational)>> = vec![Vec::new(); out.cutoff as usize + 1];
        for (m, c) in &other.terms {
            if let Some(bucket) = by_degree.get_mut(m.degree() as usize) {
                bucket.push((m, c));
            }
        }
        for (m1, c1) in &self.terms {
            let d1 = m1.degree();
            if d1 > out.cutoff {
                continue;
            }
            for bucket in &by_degree[..=(out.cutoff - d1) as usize] {
                for (m2, c2) in bucket {
                    out.add_term(m1.mul(m2), c1 * *c2);
                }
            }
        }
        out
    }

    /// Splits `self = 1 + h` with `h` nilpotent, or fails.
    fn nilpotent_part(&self, what: &'static str) -> Result<Self> {
        let h = self.sub(&Self::one(self.nparams, self.cutoff));
        if h.terms.keys().any(|m| m.degree() == 0) {
            return Err(Error::BadConstantTerm(what));
        }
        Ok(h)
    }

    /// `self^e` for `self = 1 + h`, `h` nilpotent, any integer `e`.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let h = self.nilpotent_part("pow")?;
        let mut out = Self::one(self.nparams, self.cutoff);
        let mut hn = Self::one(self.nparams, self.cutoff);
        for n in 1..=self.cutoff {
            hn = hn.mul(&h);
            if hn.is_zero() {
                break;
            }
            out = out.add(&hn.scale(&binomial(e, n)));
        }
        Ok(out)
    }

    pub fn exp(&self) -> Result<Self> {
        if self.terms.keys().any(|m| m.degree() == 0) {
            return Err(Error::BadConstantTerm("exp"));
        }
        let mut out = Self::one(self.nparams, self.cutoff);
        let mut term = Self::one(self.nparams, self.cutoff);
        for n in 1..=self.cutoff {
            term = term.mul(self).scale(&int(n as i64).recip());
            if term.is_zero() {
                break;
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    pub fn log(&self) -> Result<Self> {
        let h = self.nilpotent_part("log")?;
        let mut out = Self::zero(self.nparams, self.cutoff);
        let mut hn = Self::one(self.nparams, self.cutoff);
        for n in 1..=self.cutoff {
            hn = hn.mul(&h);
            if hn.is_zero() {
                break;
            }
            let c = int(if n % 2 == 1 { 1 } else { -1 }) / int(n as i64);
            out = out.add(&hn.scale(&c));
        }
        Ok(out)
    }

    /// Applies `x^a y^b -> x^a y^b * f^(px*a + py*b)` termwise, the action of a
    /// torus automorphism `x -> x f^px`, `y -> y f^py`.
    pub fn substitute_xy(&self, f: &Self, px: i64, py: i64) -> Result<Self> {
        let mut powers: BTreeMap<i64, Self> = BTreeMap::new();
        let mut out = Self::zero(self.nparams, self.cutoff);
        for (m, c) in &self.terms {
            let e = px * m.x + py * m.y;
            if e == 0 {
                out.add_term(m.clone(), c.clone());
                continue;
            }
            if !powers.contains_key(&e) {
                powers.insert(e, f.pow(e)?);
            }
            let single = Self::monomial(self.nparams, self.cutoff, m.params.clone(), m.x, m.y, c.clone());
            out = out.add(&single.mul(&powers[&e]));
        }
        Ok(out)
    }

    /// Renders with parameter names supplied by the caller.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut terms: Vec<(&SeriesMonomial, &Rational)> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let key = |m: &SeriesMonomial| (m.degree(), std::cmp::Reverse(m.params.clone()), m.x, m.y);
            key(a.0).cmp(&key(b.0))
        });
        let mut parts = Vec::new();
        for (m, c) in terms {
            let mut factors = Vec::new();
            for (i, e) in m.params.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[i].clone()),
                    _ => factors.push(format!("{}^{e}", names[i])),
                }
            }
            for (sym, e) in [("x", m.x), ("y", m.y)] {
                match e {
                    0 => {}
                    1 => factors.push(sym.to_string()),
                    _ => factors.push(format!("{sym}^{e}")),
                }
            }
            let coeff = if c.is_integer() { c.numer().to_string() } else { format!("({c})") };
            if factors.is_empty() {
                parts.push(coeff);
            } else if c.is_one() {
                parts.push(factors.join("*"));
            } else if *c == -Rational::one() {
                parts.push(format!("-{}", factors.join("*")));
            } else {
                parts.push(format!("{coeff}*{}", factors.join("*")));
            }
        }
        parts.join("+").replace("+-", "-")
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nparams).map(|i| format!("p{}", i + 1)).collect();
        write!(f, "{}", self.display_with(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::frac;

    #[test]
    fn mercator_series() {
        let f = TruncatedSeries::one(1, 3).add(&TruncatedSeries::param_term(1, 3, 0, 1, 0, int(1)));
        let l = f.log().unwrap();
        let mut want = TruncatedSeries::zero(1, 3);
        for (n, c) in [(1, int(1)), (2, frac(-1, 2)), (3, frac(1, 3))] {
            want.add_term(SeriesMonomial { params: vec![n], x: n as i64, y: 0 }, c);
        }
        assert_eq!(l, want);
    }

    #[test]
    fn exp_of_zero_and_round_trip() {
        assert_eq!(TruncatedSeries::zero(2, 4).exp().unwrap(), TruncatedSeries::one(2, 4));
        let g = TruncatedSeries::one(2, 4)
            .add(&TruncatedSeries::param_term(2, 4, 0, 1, 0, int(1)))
            .add(&TruncatedSeries::param_term(2, 4, 1, 0, 1, int(1)));
        assert_eq!(g.log().unwrap().exp().unwrap(), g);
    }

    #[test]
    fn constant_term_checks() {
        let one = TruncatedSeries::one(1, 2);
        assert_eq!(one.exp(), Err(Error::BadConstantTerm("exp")));
        assert_eq!(one.scale(&int(2)).log(), Err(Error::BadConstantTerm("log")));
    }

    #[test]
    fn negative_powers_invert() {
        let f = TruncatedSeries::one(1, 5).add(&TruncatedSeries::param_term(1, 5, 0, 1, 1, frac(3, 2)));
        assert_eq!(f.pow(-3).unwrap().mul(&f.pow(3).unwrap()), TruncatedSeries::one(1, 5));
        assert_eq!(f.pow(2).unwrap(), f.mul(&f));
    }
}
