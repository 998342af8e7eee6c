use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::error::Witness;
use crate::exact::{linalg, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegularityMode {
    /// Against the set itself.
    Plain,
    /// Against all sums of distinct elements.
    Sum,
}

/// Primitive-ish projective key: scaled so the first nonzero entry is 1.
pub(crate) fn direction_key(v: &[Rational]) -> Option<Vec<Rational>> {
    let lead = v.iter().find(|x| !x.is_zero())?.clone();
    Some(v.iter().map(|x| x / &lead).collect())
}

/// Distinct nonzero directions, first representative kept, input order.
pub(crate) fn distinct_directions(s: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let mut seen = BTreeSet::new();
    s.iter().filter(|v| direction_key(v).is_some_and(|k| seen.insert(k))).cloned().collect()
}

pub(crate) fn subset_sums(s: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let dim = s.first().map_or(0, |v| v.len());
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << s.len()) {
        let mut acc = vec![Rational::zero(); dim];
        for (i, v) in s.iter().enumerate() {
            if mask >> i & 1 == 1 {
                for (a, x) in acc.iter_mut().zip(v) {
                    *a += x;
                }
            }
        }
        out.push(acc);
    }
    out
}

/// Visits independent subsets of `s` of size `k` in lexicographic order until `f` returns true.
pub(crate) fn independent_subsets(
    s: &[Vec<Rational>],
    k: usize,
    f: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    fn go(
        s: &[Vec<Rational>],
        k: usize,
        start: usize,
        chosen: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if chosen.len() == k {
            return f(chosen);
        }
        for i in start..s.len() {
            if s.len() - i < k - chosen.len() {
                break;
            }
            chosen.push(i);
            let rows: Vec<Vec<Rational>> = chosen.iter().map(|&c| s[c].clone()).collect();
            if linalg::rank(&rows) == chosen.len() && go(s, k, i + 1, chosen, f) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    go(s, k, 0, &mut Vec::new(), f)
}

/// `None` when `zeta` avoids the span of every `n - 1` elements of the (plain
/// or summed) set; otherwise a witness expressing `zeta` in such a span.
pub fn regularity(zeta: &[Rational], s: &[Vec<Rational>], n: usize, mode: RegularityMode) -> Option<Witness> {
    let base = match mode {
        RegularityMode::Plain => s.to_vec(),
        RegularityMode::Sum => subset_sums(s),
    };
    let dirs = distinct_directions(&base);
    if n == 0 || dirs.len() < n - 1 {
        return None;
    }
    let k = linalg::rank(&dirs).min(n - 1);
    let mut found = None;
    independent_subsets(&dirs, k, &mut |idx| {
        let gens: Vec<Vec<Rational>> = idx.iter().map(|&i| dirs[i].clone()).collect();
        match linalg::solve_columns(&gens, zeta) {
            Some(c) => {
                let keep: Vec<usize> = (0..gens.len()).filter(|&i| !c[i].is_zero()).collect();
                found = Some(Witness::Wall {
                    zeta: zeta.to_vec(),
                    generators: keep.iter().map(|&i| gens[i].clone()).collect(),
                    coefficients: keep.iter().map(|&i| c[i].clone()).collect(),
                });
                true
            }
            None => false,
        }
    });
    found
}

/// True when every coordinate of `zeta` in the basis `basis` is positive.
pub(crate) fn in_open_cone(zeta: &[Rational], basis: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    linalg::solve_columns(basis, zeta).filter(|c| c.iter().all(|x| x.is_positive()))
}
