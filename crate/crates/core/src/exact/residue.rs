use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::linalg;
use super::{binomial, LinForm, Poly, Rational, RationalExpr, Var};
use crate::error::{Error, Result};

/// Truncated product of polynomial series in `v`, keeping degrees `0..=k`.
fn mul_truncated(a: &[Poly], b: &[Poly], k: usize) -> Vec<Poly> {
    let mut out = vec![Poly::zero(); k + 1];
    for (i, ai) in a.iter().enumerate().take(k + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(k + 1 - i) {
            if !bj.is_zero() {
                out[i + j] = out[i + j].add(&ai.mul(bj));
            }
        }
    }
    out
}

/// Coefficient of `v^-1` in the Laurent expansion of `f` where `v` is smaller
/// than every other variable. Factors `a*v + rest` with `rest != 0` are units
/// and are expanded as power series in `v`.
pub fn residue_step(f: &RationalExpr, v: Var) -> Result<RationalExpr> {
    if f.is_zero() {
        return Ok(RationalExpr::zero());
    }
    let mut numer = f.numer().clone();
    let mut order = 0i64;
    let mut passive: Vec<(LinForm, i32)> = Vec::new();
    let mut units: Vec<(Rational, LinForm, i32)> = Vec::new();
    for (l, e) in f.factors() {
        let a = l.coeff(v);
        if a.is_zero() {
            passive.push((l.clone(), e));
            continue;
        }
        let mut rest = l.clone();
        rest.set_coeff(v, Rational::zero());
        if rest.is_zero() {
            order += e as i64;
        } else if e > 0 {
            numer = numer.mul(&Poly::from_linform(l).pow(e as u32));
        } else {
            units.push((a, rest, e));
        }
    }
    let k = -1 - order;
    if k < 0 {
        return Ok(RationalExpr::zero());
    }
    let k = k as usize;
    let mut series = numer.coefficients_in(v);
    series.truncate(k + 1);
    for (a, rest, e) in &units {
        // rest^K * (a v + rest)^e / rest^(e - K), expanded to order K
        let rp = Poly::from_linform(rest);
        let s: Vec<Poly> = (0..=k)
            .map(|j| {
                let c = binomial(*e as i64, j as u32) * num_traits::pow(a.clone(), j);
                rp.pow((k - j) as u32).scale(&c)
            })
            .collect();
        series = mul_truncated(&series, &s, k);
    }
    let top = series.into_iter().nth(k).unwrap_or_else(Poly::zero);
    if top.is_zero() {
        return Ok(RationalExpr::zero());
    }
    let mut out = RationalExpr::from_poly(top);
    for (l, e) in passive {
        out = out.mul_factor(&l, e)?;
    }
    for (_, rest, e) in &units {
        out = out.mul_factor(rest, *e - k as i32)?;
    }
    Ok(out.cancel())
}

/// Folds [`residue_step`] over `order`, first variable innermost.
pub fn iterated_residue(f: &RationalExpr, order: &[Var]) -> Result<Rational> {
    let mut g = f.clone();
    for &v in order {
        g = residue_step(&g, v)?;
        if g.is_zero() {
            return Ok(Rational::zero());
        }
    }
    g.as_constant().ok_or_else(|| {
        Error::Invalid(format!("variables {:?} remain after the iterated residue", g.vars()))
    })
}

fn basis_matrix(basis: &[LinForm]) -> Result<Vec<Vec<Rational>>> {
    let n = basis.len();
    if basis.iter().any(|l| !l.constant().is_zero() || l.vars().iter().any(|&v| v >= n)) {
        return Err(Error::Invalid("basis forms must be linear in variables 0..n".into()));
    }
    Ok(basis.iter().map(|l| l.dense(n)).collect())
}

/// `f` rewritten in the coordinates `x_i = basis[i](u)`, without a Jacobian factor.
pub fn pullback_linear(f: &RationalExpr, basis: &[LinForm]) -> Result<RationalExpr> {
    let g = basis_matrix(basis)?;
    let inv = linalg::inverse(&g).ok_or(Error::SingularBasis)?;
    let map: BTreeMap<Var, LinForm> =
        inv.iter().enumerate().map(|(u, row)| (u, LinForm::from_dense(row))).collect();
    f.substitute(&map)
}

/// `f` in the coordinates `x_i = basis[i](u)` times the Jacobian determinant
/// of `u(x)`, so that iterated residues are preserved.
pub fn change_vars_linear(f: &RationalExpr, basis: &[LinForm]) -> Result<RationalExpr> {
    let d = linalg::det(&basis_matrix(basis)?);
    if d.is_zero() {
        return Err(Error::SingularBasis);
    }
    Ok(pullback_linear(f, basis)?.scale(&(Rational::one() / d)))
}
