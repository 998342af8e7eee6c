//! Quiver-level residues: `Z_Q`, tree expansions, abelianized JK and its large-R limit.

use std::collections::VecDeque;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::arrangement::{build_arrangement, jk_global, quiver_zeta, regularity, Arrangement, ChargeMode, RCharges, RegularityMode};
use crate::error::{Error, Result, Witness};
use crate::exact::{int, iterated_residue, linalg, pullback_linear, LinForm, Rational, RationalExpr};
use crate::quiver::{abelianize, moduli_dimension, spanning_trees, tree_components, weist_count, Quiver, SpanningTree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SignMode {
    /// `(-1)^(|d|-1)` normalization.
    #[default]
    Paper,
    /// Additionally multiplied by `(-1)^D`.
    Mero,
}

/// `(-1)^(|d|-1) * prod_roots r/(r-1) * prod_weights ((rho+R-1)/(rho+R))^m`.
pub fn build_zq(q: &Quiver, d: &[u32], a: &Arrangement, sign: SignMode) -> Result<RationalExpr> {
    let total: i64 = d.iter().map(|&x| x as i64).sum();
    let mut exponent = total - 1;
    if sign == SignMode::Mero {
        exponent += moduli_dimension(q, d);
    }
    let scalar = int(if exponent.rem_euclid(2) == 0 { 1 } else { -1 });
    let mut factors: Vec<(LinForm, i32)> = Vec::new();
    for r in &a.roots {
        factors.push((r.clone(), 1));
        factors.push((r.clone().with_constant(int(-1)), -1));
    }
    for w in &a.weights {
        let m = w.multiplicity as i32;
        factors.push((w.form.clone().with_constant(&w.rcharge - int(1)), m));
        factors.push((w.form.clone().with_constant(w.rcharge.clone()), -m));
    }
    RationalExpr::from_factors(scalar, factors)
}

/// Global JK of `Z_Q` with `zeta` chosen in the chamber of `-theta~`.
pub fn jk_quiver(q: &Quiver, d: &[u32], theta: &[Rational], a: &Arrangement, sign: SignMode) -> Result<Rational> {
    let f = build_zq(q, d, a, sign)?;
    let zeta = quiver_zeta(a, theta)?;
    jk_global(&f, a, &zeta)
}

/// Fails with a wall witness when `theta` lies in the span of `|Q0| - 2` arrow vectors.
pub fn check_regular_abelian(q: &Quiver, theta: &[Rational]) -> Result<()> {
    let nv = q.vertex_count();
    let arrows: Vec<Vec<Rational>> = q
        .arrows()
        .iter()
        .map(|&(t, h)| {
            let mut e = vec![Rational::zero(); nv];
            e[h] += int(1);
            e[t] -= int(1);
            e
        })
        .collect();
    match regularity(theta, &arrows, nv.saturating_sub(1), RegularityMode::Plain) {
        Some(w) => Err(Error::NonRegularStability(w)),
        None => Ok(()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeTerm {
    /// Tree in the reduced quiver.
    pub tree: SpanningTree,
    /// Charged arrow chosen for each tree arrow.
    pub lift: Vec<usize>,
    pub components: Vec<Rational>,
    pub point: Vec<Rational>,
    /// `IR_0` of the germ at `point`; zero for unstable trees.
    pub value: Rational,
    pub stable: bool,
}

/// `sum over stable trees and their lifts of IR_0(phi_{x_T}(Z_Q))`, for the
/// abelian dimension vector on `q`.
pub fn jk_tree_expansion(q: &Quiver, theta: &[Rational], a: &Arrangement) -> Result<(Rational, Vec<TreeTerm>)> {
    let nv = q.vertex_count();
    let ones = vec![1u32; nv];
    if a.n + 1 != nv || a.roots.len() > 0 {
        return Err(Error::Invalid("tree expansion needs the abelian arrangement of the quiver".into()));
    }
    q.validate(true)?;
    check_regular_abelian(q, theta)?;
    let (qbar, _, preimages) = q.reduced();
    let z = build_zq(q, &ones, a, SignMode::Paper)?;
    // charged arrow per reduced arrow: original arrows when split, the reduced arrow itself otherwise
    let charges: Vec<Vec<usize>> = match a.mode {
        ChargeMode::Split => preimages,
        ChargeMode::Literal => (0..qbar.arrow_count()).map(|i| vec![i]).collect(),
    };
    let trees = spanning_trees(&qbar)?;
    let mut jobs = Vec::new();
    for t in trees {
        let components = tree_components(&qbar, &t, theta)?;
        if let Some(k) = components.iter().position(|c| c.is_zero()) {
            return Err(Error::NonRegularStability(Witness::Tree { tree: t.arrows.clone(), arrow: t.arrows[k] }));
        }
        let stable = components.iter().all(|c| c.is_negative());
        let mut lifts: Vec<Vec<usize>> = vec![Vec::new()];
        for &arrow in &t.arrows {
            lifts = lifts
                .into_iter()
                .flat_map(|l| {
                    charges[arrow].iter().map(move |&c| {
                        let mut l = l.clone();
                        l.push(c);
                        l
                    })
                })
                .collect();
        }
        for lift in lifts {
            jobs.push((t.clone(), lift, components.clone(), stable));
        }
    }
    let terms: Vec<Result<TreeTerm>> = jobs
        .into_par_iter()
        .map(|(tree, lift, components, stable)| {
            // weights are listed per charged arrow, one each for an abelian vector
            let forms: Vec<LinForm> = lift.iter().map(|&c| a.weights[c].form.clone()).collect();
            let rows: Vec<Vec<Rational>> = forms.iter().map(|f| f.dense(a.n)).collect();
            let rhs: Vec<Rational> = lift.iter().map(|&c| -a.weights[c].rcharge.clone()).collect();
            let inv = linalg::inverse(&rows).ok_or(Error::SingularBasis)?;
            let point: Vec<Rational> = inv.iter().map(|r| linalg::dot(r, &rhs)).collect();
            let value = if stable {
                let germ = z.translate(&point)?;
                let local = pullback_linear(&germ, &forms)?;
                iterated_residue(&local, &(0..a.n).collect::<Vec<_>>())?
            } else {
                Rational::zero()
            };
            Ok(TreeTerm { tree, lift, components, point, value, stable })
        })
        .collect();
    let terms: Vec<TreeTerm> = terms.into_iter().collect::<Result<_>>()?;
    let total = terms.iter().map(|t| t.value.clone()).sum();
    Ok((total, terms))
}

/// Per-term R-charge seed.
pub fn term_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_add((index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermValue {
    pub coefficient: Rational,
    pub value: Rational,
}

/// Abelianized JK residue with R-charges `lambda * R~`, plus the per-term values.
pub fn jk_ab_terms(
    q: &Quiver,
    d: &[u32],
    zeta: &[Rational],
    seed: u64,
    lambda: &Rational,
    mode: ChargeMode,
) -> Result<(Rational, Vec<TermValue>)> {
    let terms = abelianize(q, d, zeta)?;
    let values: Vec<Result<TermValue>> = terms
        .par_iter()
        .enumerate()
        .map(|(k, t)| {
            let wrap = |e: Error| match e {
                Error::NonRegularStability(w) => Error::NonRegularStability(Witness::Term { index: k, inner: Box::new(w) }),
                e => e,
            };
            t.quiver.validate(true)?;
            check_regular_abelian(&t.quiver, &t.stability).map_err(wrap)?;
            let a = build_arrangement(&t.quiver, &t.dimension, None, &RCharges::Seed(term_seed(seed, k)), mode)?;
            let (v, _) = jk_tree_expansion(&t.quiver, &t.stability, &a.scaled(lambda)).map_err(wrap)?;
            Ok(TermValue { coefficient: t.coefficient.clone(), value: v })
        })
        .collect();
    let values: Vec<TermValue> = values.into_iter().collect::<Result<_>>()?;
    let total = values.iter().map(|t| &t.coefficient * &t.value).sum();
    Ok((total, values))
}

pub fn jk_ab(q: &Quiver, d: &[u32], zeta: &[Rational], seed: u64, lambda: &Rational) -> Result<Rational> {
    Ok(jk_ab_terms(q, d, zeta, seed, lambda, ChargeMode::Split)?.0)
}

/// Closed-form large-R limit: `sum coefficient * weist_count(term)`.
pub fn jk_ab_infinity_terms(q: &Quiver, d: &[u32], zeta: &[Rational]) -> Result<(Rational, Vec<TermValue>)> {
    let terms = abelianize(q, d, zeta)?;
    let mut values = Vec::new();
    for (k, t) in terms.iter().enumerate() {
        let wrap = |e: Error| match e {
            Error::NonRegularStability(w) => Error::NonRegularStability(Witness::Term { index: k, inner: Box::new(w) }),
            e => e,
        };
        t.quiver.validate(true)?;
        check_regular_abelian(&t.quiver, &t.stability).map_err(wrap)?;
        let w = weist_count(&t.quiver, &t.stability).map_err(wrap)?;
        values.push(TermValue { coefficient: t.coefficient.clone(), value: w });
    }
    let total = values.iter().map(|t| &t.coefficient * &t.value).sum();
    Ok((total, values))
}

pub fn jk_ab_infinity(q: &Quiver, d: &[u32], zeta: &[Rational]) -> Result<Rational> {
    Ok(jk_ab_infinity_terms(q, d, zeta)?.0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepRow {
    pub lambda: Rational,
    pub value: Rational,
    pub distance: Rational,
}

/// `jk_ab` at each `lambda` with its exact distance to the closed-form limit.
pub fn lambda_sweep(
    q: &Quiver,
    d: &[u32],
    zeta: &[Rational],
    seed: u64,
    lambdas: &[Rational],
) -> Result<(Rational, Vec<SweepRow>)> {
    let limit = jk_ab_infinity(q, d, zeta)?;
    let mut rows = Vec::new();
    for l in lambdas {
        let value = jk_ab(q, d, zeta, seed, l)?;
        let distance = (&value - &limit).abs();
        rows.push(SweepRow { lambda: l.clone(), value, distance });
    }
    Ok((limit, rows))
}

/// Iterated residue of `W_T(w) = prod_{i->j} (w_i/w_j) m/(w_j - w_i)` at the
/// point where all `w` coincide, leaf arrows first, in the coordinates
/// `v_a = w_head - w_tail`.
pub fn wt_residue(t: &Quiver, mult: &[u32], root: usize) -> Result<Rational> {
    let nv = t.vertex_count();
    let na = t.arrow_count();
    if root >= nv || na + 1 != nv || !t.is_connected() || mult.len() != na {
        return Err(Error::NotATree);
    }
    // variables 0..na are the v_a, na is w_root
    let w0 = na;
    let mut w: Vec<Option<LinForm>> = vec![None; nv];
    let mut depth = vec![0usize; nv];
    w[root] = Some(LinForm::var(w0));
    let mut queue = VecDeque::from([root]);
    while let Some(x) = queue.pop_front() {
        for (a, &(tl, hd)) in t.arrows().iter().enumerate() {
            let (y, s) = if tl == x { (hd, 1) } else if hd == x { (tl, -1) } else { continue };
            if w[y].is_some() {
                continue;
            }
            let wx = w[x].clone().unwrap();
            w[y] = Some(wx.add(&LinForm::var(a).scale(&int(s))));
            depth[y] = depth[x] + 1;
            queue.push_back(y);
        }
    }
    let w: Vec<LinForm> = w.into_iter().collect::<Option<_>>().ok_or(Error::NotATree)?;
    let mut f = RationalExpr::one();
    for (a, &(tl, hd)) in t.arrows().iter().enumerate() {
        f = f
            .scale(&int(mult[a] as i64))
            .mul_factor(&w[tl], 1)?
            .mul_factor(&w[hd], -1)?
            .mul_factor(&LinForm::var(a), -1)?;
    }
    let mut order: Vec<usize> = (0..na).collect();
    let child = |a: usize| {
        let (tl, hd) = t.arrows()[a];
        depth[tl].max(depth[hd])
    };
    order.sort_by(|&x, &y| child(y).cmp(&child(x)).then(x.cmp(&y)));
    let mut g = f;
    for v in order {
        g = crate::exact::residue_step(&g, v)?;
    }
    g.as_constant().ok_or_else(|| Error::Invalid("residue still depends on the root variable".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::frac;

    fn th(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn zq_shapes() {
        let a2 = Quiver::path(2);
        let a = build_arrangement(&a2, &[1, 1], None, &RCharges::Explicit(vec![frac(1, 3)]), ChargeMode::Split).unwrap();
        let z = build_zq(&a2, &[1, 1], &a, SignMode::Paper).unwrap();
        let u = LinForm::var(0).scale(&int(-1));
        let want = RationalExpr::from_factors(int(-1), [(u.clone().with_constant(frac(-2, 3)), 1), (u.with_constant(frac(1, 3)), -1)])
            .unwrap();
        assert_eq!(z, want);
        let k22 = Quiver::bipartite(2, 2);
        let a = build_arrangement(&k22, &[1; 4], None, &RCharges::Seed(1), ChargeMode::Split).unwrap();
        assert_eq!(build_zq(&k22, &[1; 4], &a, SignMode::Paper).unwrap().factors().count(), 8);
    }

    #[test]
    fn tree_expansion_fixtures() {
        let k21 = Quiver::bipartite(2, 1);
        let a = build_arrangement(&k21, &[1; 3], None, &RCharges::Seed(3), ChargeMode::Split).unwrap();
        let (v, terms) = jk_tree_expansion(&k21, &th(&[1, 1, -2]), &a).unwrap();
        assert_eq!(v, int(1));
        assert_eq!(terms.len(), 1);
        assert!(terms[0].stable);

        let kr = Quiver::kronecker(2);
        let r = vec![frac(1, 3), frac(1, 7)];
        let a = build_arrangement(&kr, &[1, 1], None, &RCharges::Explicit(r.clone()), ChargeMode::Split).unwrap();
        let (v, terms) = jk_tree_expansion(&kr, &th(&[1, -1]), &a).unwrap();
        assert_eq!(v, int(2));
        let d = &r[1] - &r[0];
        let mut got: Vec<Rational> = terms.iter().map(|t| t.value.clone()).collect();
        got.sort();
        let mut want = vec![(&d - int(1)) / &d, (-&d - int(1)) / (-&d)];
        want.sort();
        assert_eq!(got, want);

        let a2 = Quiver::path(2);
        let a = build_arrangement(&a2, &[1, 1], None, &RCharges::Seed(3), ChargeMode::Split).unwrap();
        let (v, terms) = jk_tree_expansion(&a2, &th(&[-1, 1]), &a).unwrap();
        assert_eq!(v, int(0));
        assert!(!terms[0].stable);
        assert_eq!(terms[0].components, th(&[1]));
    }

    #[test]
    fn tree_expansion_matches_global() {
        let cases: Vec<(Quiver, Vec<i64>)> = vec![
            (Quiver::bipartite(2, 1), vec![1, 1, -2]),
            (Quiver::bipartite(2, 2), vec![3, 1, -2, -2]),
            (Quiver::kronecker(2), vec![1, -1]),
            (Quiver::path(3), vec![1, 0, -1]),
            (Quiver::path(3), vec![-1, 2, -1]),
        ];
        for (q, t) in cases {
            let ones = vec![1; q.vertex_count()];
            let a = build_arrangement(&q, &ones, None, &RCharges::Seed(11), ChargeMode::Split).unwrap();
            let (v, _) = jk_tree_expansion(&q, &th(&t), &a).unwrap();
            assert_eq!(v, jk_quiver(&q, &ones, &th(&t), &a, SignMode::Paper).unwrap(), "{t:?}");
        }
    }

    #[test]
    fn abelianized_values() {
        let k11 = Quiver::bipartite(1, 1);
        for lambda in [int(1), int(7), int(1000)] {
            assert_eq!(jk_ab(&k11, &[2, 1], &th(&[1, -2]), 5, &lambda).unwrap(), int(0));
        }
        assert_eq!(jk_ab(&k11, &[1, 1], &th(&[1, -1]), 5, &int(1)).unwrap(), int(1));
        assert_eq!(jk_ab(&Quiver::bipartite(2, 1), &[1, 1, 1], &th(&[1, 1, -2]), 5, &int(1)).unwrap(), int(1));
        assert_eq!(jk_ab_infinity(&Quiver::kronecker(2), &[1, 1], &th(&[1, -1])).unwrap(), int(2));
        assert_eq!(jk_ab_infinity(&k11, &[2, 1], &th(&[1, -2])).unwrap(), int(0));
        assert_eq!(jk_ab_infinity(&Quiver::bipartite(2, 2), &[1; 4], &th(&[3, 1, -2, -2])).unwrap(), int(2));
    }

    #[test]
    fn sweeps() {
        let k11 = Quiver::bipartite(1, 1);
        let (limit, rows) = lambda_sweep(&k11, &[2, 1], &th(&[1, -2]), 9, &[int(10), int(100)]).unwrap();
        assert_eq!(limit, int(0));
        assert!(rows.iter().all(|r| r.value.is_zero()));
        let (limit, rows) = lambda_sweep(&Quiver::kronecker(2), &[1, 1], &th(&[1, -1]), 9, &[int(10)]).unwrap();
        assert_eq!((limit, rows[0].value.clone()), (int(2), int(2)));
        let (_, rows) = lambda_sweep(&k11, &[2, 1], &th(&[1, -2]), 9, &[]).unwrap();
        assert!(rows.is_empty());
    }

    #[test]
    fn w_t_residues() {
        assert_eq!(wt_residue(&Quiver::path(2), &[2], 0).unwrap(), int(2));
        assert_eq!(wt_residue(&Quiver::path(3), &[1, 3], 0).unwrap(), int(3));
        assert_eq!(wt_residue(&Quiver::bipartite(2, 1), &[1, 1], 2).unwrap(), int(1));
        assert_eq!(wt_residue(&Quiver::bipartite(2, 2), &[1; 4], 0), Err(Error::NotATree));
    }
}
