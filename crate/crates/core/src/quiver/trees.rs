use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::Quiver;
use crate::error::{Error, Result, Witness};
use crate::exact::{int, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpanningTree {
    /// Arrow ids in increasing order.
    pub arrows: Vec<usize>,
    pub root: Option<usize>,
}

fn find(parent: &mut [usize], mut v: usize) -> usize {
    while parent[v] != v {
        parent[v] = parent[parent[v]];
        v = parent[v];
    }
    v
}

fn is_spanning_tree(q: &Quiver, arrows: &[usize]) -> bool {
    let n = q.vertex_count();
    if arrows.len() + 1 != n {
        return false;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    for &a in arrows {
        let (t, h) = q.arrows()[a];
        let (rt, rh) = (find(&mut parent, t), find(&mut parent, h));
        if rt == rh {
            return false;
        }
        parent[rt] = rh;
    }
    true
}

/// All spanning trees, lexicographic in arrow ids.
pub fn spanning_trees(qbar: &Quiver) -> Result<Vec<SpanningTree>> {
    if !qbar.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = qbar.vertex_count();
    if n == 0 {
        return Ok(Vec::new());
    }
    Ok((0..qbar.arrow_count())
        .combinations(n - 1)
        .filter(|c| is_spanning_tree(qbar, c))
        .map(|arrows| SpanningTree { arrows, root: None })
        .collect())
}

/// Coefficients `c` with `theta = sum_a c_a (e_head(a) - e_tail(a))`, aligned with
/// `t.arrows`. Solved by peeling leaves, which is exact elimination on the
/// triangular incidence system of a tree.
pub fn tree_components(q: &Quiver, t: &SpanningTree, theta: &[Rational]) -> Result<Vec<Rational>> {
    if !is_spanning_tree(q, &t.arrows) {
        return Err(Error::NotATree);
    }
    let n = q.vertex_count();
    let mut residual: Vec<Rational> = theta.to_vec();
    let mut degree = vec![0usize; n];
    for &a in &t.arrows {
        let (tl, hd) = q.arrows()[a];
        degree[tl] += 1;
        degree[hd] += 1;
    }
    let mut done = vec![false; t.arrows.len()];
    let mut c = vec![Rational::zero(); t.arrows.len()];
    for _ in 0..t.arrows.len() {
        let (k, leaf) = t
            .arrows
            .iter()
            .enumerate()
            .filter(|(k, _)| !done[*k])
            .find_map(|(k, &a)| {
                let (tl, hd) = q.arrows()[a];
                if degree[hd] == 1 {
                    Some((k, hd))
                } else if degree[tl] == 1 {
                    Some((k, tl))
                } else {
                    None
                }
            })
            .expect("a tree has a leaf");
        let (tl, hd) = q.arrows()[t.arrows[k]];
        let (other, s) = if leaf == hd { (tl, Rational::one()) } else { (hd, -Rational::one()) };
        c[k] = &residual[leaf] * &s;
        let moved = &c[k] * &s;
        residual[other] += moved;
        residual[leaf] = Rational::zero();
        degree[tl] -= 1;
        degree[hd] -= 1;
        done[k] = true;
    }
    let total: Rational = residual.iter().sum();
    if !total.is_zero() {
        return Err(Error::NotNormalized(crate::exact::fmt_rational(&theta.iter().sum())));
    }
    Ok(c)
}

/// Spanning trees whose coefficients are all negative. A vanishing coefficient
/// in any tree is a hard error.
pub fn stable_trees(qbar: &Quiver, theta: &[Rational]) -> Result<Vec<SpanningTree>> {
    let trees = spanning_trees(qbar)?;
    let verdicts: Vec<Result<bool>> = trees
        .par_iter()
        .map(|t| {
            let c = tree_components(qbar, t, theta)?;
            if let Some(k) = c.iter().position(|x| x.is_zero()) {
                return Err(Error::NonRegularStability(Witness::Tree {
                    tree: t.arrows.clone(),
                    arrow: t.arrows[k],
                }));
            }
            Ok(c.iter().all(|x| x.is_negative()))
        })
        .collect();
    let mut out = Vec::new();
    for (t, v) in trees.into_iter().zip(verdicts) {
        if v? {
            out.push(t);
        }
    }
    Ok(out)
}

/// `sum over stable trees of the reduced quiver of prod m_a`.
pub fn weist_count(q: &Quiver, theta: &[Rational]) -> Result<Rational> {
    let (qbar, mult, _) = q.reduced();
    let trees = stable_trees(&qbar, theta)?;
    Ok(trees
        .iter()
        .map(|t| t.arrows.iter().map(|&a| int(mult[a] as i64)).product::<Rational>())
        .sum())
}
