use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use super::regularity::{in_open_cone, regularity, RegularityMode};
use crate::error::{Error, Result};
use crate::exact::{iterated_residue, linalg, pullback_linear, LinForm, Rational, RationalExpr};

/// A complete flag of subspaces spanned by elements of an active set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flag {
    /// `steps[j]` lists the active-set indices in `F_{j+1} \ F_j`.
    pub steps: Vec<Vec<usize>>,
    /// Partial sums `kappa_j`.
    pub kappa: Vec<Vec<Rational>>,
    /// Orientation of the kappa basis relative to `dmu`, 0 when improper.
    pub nu: i32,
    /// Admissible basis: `basis[j]` is an element of `steps[j]`, the last one
    /// rescaled so the basis has the volume of `dmu`.
    pub basis: Vec<Vec<Rational>>,
    /// Whether `zeta` has positive coordinates in the kappa basis.
    pub positive: bool,
}

fn in_span(rows: &[Vec<Rational>], v: &[Rational]) -> bool {
    let mut m = rows.to_vec();
    m.push(v.to_vec());
    linalg::rank(&m) == rows.len()
}

/// Every complete flag of `activeset`, with kappa data and cone membership of `zeta`.
pub fn enumerate_flags(activeset: &[Vec<Rational>], zeta: &[Rational], dmu: &[Vec<Rational>]) -> Result<Vec<Flag>> {
    let n = zeta.len();
    if let Some(w) = regularity(zeta, activeset, n, RegularityMode::Sum) {
        return Err(Error::NotSumRegular(w));
    }
    let vol = linalg::det(dmu);
    if vol.is_zero() {
        return Err(Error::SingularBasis);
    }
    let mut chains: Vec<Vec<Vec<usize>>> = Vec::new();
    extend(activeset, n, &mut Vec::new(), &BTreeSet::new(), &mut Vec::new(), &mut chains);
    let mut out = Vec::new();
    for steps in chains {
        let mut kappa = Vec::new();
        let mut acc = vec![Rational::zero(); n];
        for step in &steps {
            for &i in step {
                for (a, x) in acc.iter_mut().zip(&activeset[i]) {
                    *a += x;
                }
            }
            kappa.push(acc.clone());
        }
        let dk = linalg::det(&kappa);
        let nu = if dk.is_zero() { 0 } else if (dk * &vol).is_positive() { 1 } else { -1 };
        let mut basis: Vec<Vec<Rational>> = steps.iter().map(|s| activeset[s[0]].clone()).collect();
        let scale = &vol / linalg::det(&basis);
        for x in basis[n - 1].iter_mut() {
            *x *= &scale;
        }
        let positive = nu != 0 && in_open_cone(zeta, &kappa).is_some();
        out.push(Flag { steps, kappa, nu, basis, positive });
    }
    Ok(out)
}

fn extend(
    s: &[Vec<Rational>],
    n: usize,
    span: &mut Vec<Vec<Rational>>,
    contained: &BTreeSet<usize>,
    steps: &mut Vec<Vec<usize>>,
    out: &mut Vec<Vec<Vec<usize>>>,
) {
    if span.len() == n {
        out.push(steps.clone());
        return;
    }
    let mut children: BTreeSet<Vec<usize>> = BTreeSet::new();
    for (i, v) in s.iter().enumerate() {
        if contained.contains(&i) || v.iter().all(|x| x.is_zero()) {
            continue;
        }
        span.push(v.clone());
        let next: Vec<usize> = (0..s.len()).filter(|&j| in_span(span, &s[j])).collect();
        span.pop();
        if !children.insert(next.clone()) {
            continue;
        }
        let step: Vec<usize> = next.iter().copied().filter(|j| !contained.contains(j)).collect();
        span.push(v.clone());
        steps.push(step);
        let next_set: BTreeSet<usize> = next.into_iter().collect();
        extend(s, n, span, &next_set, steps, out);
        steps.pop();
        span.pop();
    }
}

/// Iterated residue of `f` in the coordinates `x_j = basis_j(u)`, innermost first.
pub fn flag_residue(f: &RationalExpr, flag: &Flag) -> Result<Rational> {
    let basis: Vec<LinForm> = flag.basis.iter().map(|v| LinForm::from_dense(v)).collect();
    let g = pullback_linear(f, &basis)?;
    let order: Vec<usize> = (0..basis.len()).collect();
    iterated_residue(&g, &order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn v(x: &[i64]) -> Vec<Rational> {
        x.iter().map(|&a| int(a)).collect()
    }

    fn std2() -> Vec<Vec<Rational>> {
        vec![v(&[1, 0]), v(&[0, 1])]
    }

    #[test]
    fn three_vectors() {
        let s = [v(&[1, 0]), v(&[0, 1]), v(&[1, 1])];
        assert!(matches!(enumerate_flags(&s, &v(&[2, 1]), &std2()), Err(Error::NotSumRegular(_))));
        let flags = enumerate_flags(&s, &v(&[3, 1]), &std2()).unwrap();
        assert_eq!(flags.len(), 3);
        let pos: Vec<&Flag> = flags.iter().filter(|f| f.positive).collect();
        assert_eq!(pos.len(), 1);
        assert_eq!(pos[0].steps, vec![vec![0], vec![1, 2]]);
        assert_eq!(pos[0].nu, 1);
        assert_eq!(pos[0].kappa, vec![v(&[1, 0]), v(&[2, 2])]);
        let improper = flags.iter().find(|f| f.steps[0] == vec![2]).unwrap();
        assert_eq!(improper.nu, 0);
    }

    #[test]
    fn basis_flags() {
        let s = [v(&[1, 0]), v(&[0, 1])];
        let flags = enumerate_flags(&s, &v(&[2, 1]), &std2()).unwrap();
        assert_eq!(flags.iter().filter(|f| f.positive).count(), 1);
        let none = enumerate_flags(&s, &v(&[-1, -1]), &std2());
        assert!(matches!(none, Err(Error::NotSumRegular(_))));
        let none = enumerate_flags(&s, &v(&[-2, -1]), &std2()).unwrap();
        assert!(none.iter().all(|f| !f.positive));
    }

    #[test]
    fn residues_along_flags() {
        let s = [v(&[1, 0]), v(&[0, 1])];
        let flags = enumerate_flags(&s, &v(&[2, 1]), &std2()).unwrap();
        let f = RationalExpr::from_factors(int(1), [(LinForm::var(0), -1), (LinForm::var(1), -1)]).unwrap();
        let flag = flags.iter().find(|f| f.positive).unwrap();
        assert_eq!(flag_residue(&f, flag).unwrap(), int(1));
        let skew = [v(&[1, 0]), v(&[1, 1])];
        let flags = enumerate_flags(&skew, &v(&[3, 1]), &std2()).unwrap();
        let flag = flags.iter().find(|f| f.positive).unwrap();
        let g = RationalExpr::from_factors(int(1), [(LinForm::var(0), -1), (LinForm::from_dense(&v(&[1, 1])), -1)])
            .unwrap();
        assert_eq!(flag_residue(&g, flag).unwrap(), int(1));
        let unit = RationalExpr::from_factors(int(1), [(LinForm::var(0).with_constant(int(1)), -1), (LinForm::var(1), -1)])
            .unwrap();
        assert_eq!(flag_residue(&unit, flag).unwrap(), int(0));
    }
}
