use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::flags::{enumerate_flags, flag_residue};
use super::regularity::{distinct_directions, independent_subsets, regularity, RegularityMode};
use super::{singular_points, Arrangement, SingularPoint};
use crate::error::{Error, Result};
use crate::exact::{int, iterated_residue, linalg, pullback_linear, LinForm, Rational, RationalExpr};

/// Flag-sum JK residue `sum over positive flags of nu * Res_F(f)`.
pub fn jk_zeta(
    f: &RationalExpr,
    activeset: &[Vec<Rational>],
    zeta: &[Rational],
    dmu: &[Vec<Rational>],
) -> Result<Rational> {
    let flags = enumerate_flags(activeset, zeta, dmu)?;
    let mut total = Rational::zero();
    for flag in flags.iter().filter(|f| f.positive) {
        total += int(flag.nu as i64) * flag_residue(f, flag)?;
    }
    Ok(total)
}

/// JK residue for a basis active set: zero outside the open positive cone,
/// otherwise the iterated residue in the basis coordinates ordered by
/// decreasing component of `zeta`, divided by `|det basis|`.
pub fn jk_basis(f: &RationalExpr, basis: &[Vec<Rational>], zeta: &[Rational]) -> Result<Rational> {
    let n = zeta.len();
    if basis.len() != n {
        return Err(Error::SingularBasis);
    }
    if let Some(w) = regularity(zeta, basis, n, RegularityMode::Sum) {
        return Err(Error::NotSumRegular(w));
    }
    let c = linalg::solve_columns(basis, zeta).ok_or(Error::SingularBasis)?;
    if linalg::rank(basis) < n {
        return Err(Error::SingularBasis);
    }
    if !c.iter().all(|x| x.is_positive()) {
        return Ok(Rational::zero());
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| c[b].cmp(&c[a]));
    let ordered: Vec<LinForm> = order.iter().map(|&i| LinForm::from_dense(&basis[i])).collect();
    let g = pullback_linear(f, &ordered)?;
    let vars: Vec<usize> = (0..n).collect();
    let det = linalg::det(basis).abs();
    Ok(iterated_residue(&g, &vars)? / det)
}

fn standard_dmu(n: usize) -> Vec<Vec<Rational>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect()
}

fn active_vectors(a: &Arrangement, p: &SingularPoint) -> Vec<Vec<Rational>> {
    let hs = a.hyperplanes();
    p.active.iter().map(|&i| hs[i].form.dense(a.n)).collect()
}

/// Local JK residue of the germ of `f` at one singular point.
pub fn local_jk(f: &RationalExpr, a: &Arrangement, p: &SingularPoint, zeta: &[Rational]) -> Result<Rational> {
    let active = active_vectors(a, p);
    let g = f.translate(&p.location)?;
    if active.len() == a.n && linalg::rank(&active) == a.n {
        jk_basis(&g, &active, zeta)
    } else {
        jk_zeta(&g, &active, zeta, &standard_dmu(a.n))
    }
}

/// Sum over singular points of the local JK residue of the translated germ.
pub fn jk_global(f: &RationalExpr, a: &Arrangement, zeta: &[Rational]) -> Result<Rational> {
    let points = singular_points(a)?;
    let values: Vec<Result<Rational>> = points.par_iter().map(|p| local_jk(f, a, p, zeta)).collect();
    values.into_iter().sum()
}

/// A sum-regular `zeta` in the chamber of `-theta~`: `-theta~ + eps * delta` with
/// `eps` a `2^-40` fraction of the smallest wall distance ratio, halved or with a
/// new `delta` until every active set at a singular point is satisfied.
pub fn quiver_zeta(a: &Arrangement, theta: &[Rational]) -> Result<Vec<Rational>> {
    let n = a.n;
    let base: Vec<Rational> = a.coords.iter().map(|&(v, _)| -theta[v].clone()).collect();
    let elements: Vec<Vec<Rational>> = a.hyperplanes().iter().map(|h| h.form.dense(n)).collect();
    if let Some(w) = regularity(&base, &elements, n, RegularityMode::Plain) {
        return Err(Error::NonRegularStability(w));
    }
    let points = singular_points(a)?;
    let actives: Vec<Vec<Vec<Rational>>> = points.iter().map(|p| active_vectors(a, p)).collect();
    let sum_regular = |z: &[Rational]| actives.iter().all(|s| regularity(z, s, n, RegularityMode::Sum).is_none());
    if sum_regular(&base) {
        return Ok(base);
    }
    let normals = wall_normals(&elements, n);
    for attempt in 0..8u32 {
        let delta: Vec<Rational> = (0..n).map(|i| int(((i + 1) as i64).pow(attempt + 1))).collect();
        let ratio = normals
            .iter()
            .filter_map(|w| {
                let d = linalg::dot(w, &delta).abs();
                (!d.is_zero()).then(|| linalg::dot(w, &base).abs() / d)
            })
            .min()
            .unwrap_or_else(Rational::one);
        let mut eps = ratio / Rational::from_integer(BigInt::one() << 40);
        for _ in 0..64 {
            let z: Vec<Rational> = base.iter().zip(&delta).map(|(b, d)| b + &eps * d).collect();
            if sum_regular(&z) {
                return Ok(z);
            }
            eps /= int(2);
        }
    }
    Err(Error::Invalid("no sum-regular perturbation found".into()))
}

/// Normals of the hyperplanes spanned by `n - 1` independent elements.
fn wall_normals(elements: &[Vec<Rational>], n: usize) -> Vec<Vec<Rational>> {
    if n == 1 {
        return vec![vec![Rational::one()]];
    }
    let dirs = distinct_directions(elements);
    let mut out = Vec::new();
    independent_subsets(&dirs, n - 1, &mut |idx| {
        let rows: Vec<Vec<Rational>> = idx.iter().map(|&i| dirs[i].clone()).collect();
        if let Some(w) = linalg::normal_vector(&rows, n) {
            out.push(w);
        }
        false
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{build_arrangement, ChargeMode, RCharges};
    use crate::exact::frac;
    use crate::quiver::Quiver;

    fn v(x: &[i64]) -> Vec<Rational> {
        x.iter().map(|&a| int(a)).collect()
    }

    fn inv(forms: &[&[i64]]) -> RationalExpr {
        RationalExpr::from_factors(int(1), forms.iter().map(|f| (LinForm::from_dense(&v(f)), -1))).unwrap()
    }

    #[test]
    fn flag_sums() {
        let s = [v(&[1, 0]), v(&[0, 1]), v(&[1, 1])];
        let dmu = standard_dmu(2);
        assert_eq!(jk_zeta(&inv(&[&[1, 0], &[0, 1], &[1, 1]]), &s, &v(&[3, 1]), &dmu).unwrap(), int(0));
        let b = [v(&[1, 0]), v(&[0, 1])];
        assert_eq!(jk_zeta(&inv(&[&[1, 0], &[0, 1]]), &b, &v(&[2, 1]), &dmu).unwrap(), int(1));
        assert_eq!(jk_zeta(&inv(&[&[1, 0], &[0, 1]]), &b, &v(&[-2, -1]), &dmu).unwrap(), int(0));
    }

    #[test]
    fn basis_shortcut() {
        let b = [v(&[1, 0]), v(&[1, 1])];
        let f = inv(&[&[1, 0], &[1, 1]]);
        assert_eq!(jk_basis(&f, &b, &v(&[3, 1])).unwrap(), int(1));
        assert_eq!(jk_basis(&f, &b, &v(&[-1, -2])).unwrap(), int(0));
        assert!(matches!(jk_basis(&f, &b, &v(&[4, 2])), Err(Error::NotSumRegular(_))));
    }

    #[test]
    fn global_residues() {
        let a2 = build_arrangement(&Quiver::path(2), &[1, 1], None, &RCharges::Explicit(vec![frac(1, 3)]), ChargeMode::Split)
            .unwrap();
        // -(rho + R - 1)/(rho + R) with rho = -u
        let rho = LinForm::var(0).scale(&int(-1));
        let f = RationalExpr::from_factors(
            int(-1),
            [(rho.with_constant(frac(-2, 3)), 1), (LinForm::var(0).scale(&int(-1)).with_constant(frac(1, 3)), -1)],
        )
        .unwrap();
        let z = quiver_zeta(&a2, &v(&[1, -1])).unwrap();
        assert_eq!(jk_global(&f, &a2, &z).unwrap(), int(1));
        let z = quiver_zeta(&a2, &v(&[-1, 1])).unwrap();
        assert_eq!(jk_global(&f, &a2, &z).unwrap(), int(0));
    }
}
