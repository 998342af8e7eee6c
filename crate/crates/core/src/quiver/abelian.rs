use num_traits::One;

use super::{check_normalized, Quiver};
use crate::error::Result;
use crate::exact::{factorial, int, Rational};

/// One summand of the abelianization of `(Q, d, zeta)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianizationTerm {
    /// Blown-up quiver on the support of the lifted dimension vector.
    pub quiver: Quiver,
    /// All ones, one per blown-up vertex.
    pub dimension: Vec<u32>,
    /// Lifted stability `l * zeta_i` at a weight-`l` copy of `i`.
    pub stability: Vec<Rational>,
    pub coefficient: Rational,
    /// `multiplicities[i][l-1]` is the number of weight-`l` copies of vertex `i`.
    pub multiplicities: Vec<Vec<u32>>,
    /// `(original vertex, weight l, copy k)` for each blown-up vertex.
    pub origin: Vec<(usize, u32, u32)>,
}

/// Partitions of `n` as multiplicity vectors `m[l-1]`, largest parts first.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, max: u32, parts: &mut Vec<u32>, out: &mut Vec<Vec<u32>>, n: u32) {
        if rest == 0 {
            let mut m = vec![0; n as usize];
            for &p in parts.iter() {
                m[p as usize - 1] += 1;
            }
            out.push(m);
            return;
        }
        for p in (1..=max.min(rest)).rev() {
            parts.push(p);
            go(rest - p, p, parts, out, n);
            parts.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out, n);
    out
}

fn coefficient(d: &[u32], mults: &[Vec<u32>]) -> Rational {
    let mut c = Rational::one();
    for (&di, m) in d.iter().zip(mults) {
        c *= Rational::from_integer(factorial(di));
        for (l, &ml) in m.iter().enumerate() {
            let l = l as i64 + 1;
            let base = int(if l % 2 == 1 { 1 } else { -1 }) / int(l * l);
            c *= num_traits::pow(base, ml as usize) / Rational::from_integer(factorial(ml));
        }
    }
    c
}

/// One term per multiplicity vector `m_* |- d`, vertices with `d_i = 0` dropped.
/// Copies of `i` are named `i` when `d_i = 1` and `i[l.k]` otherwise; the `l * l'`
/// parallel arrows between copies follow the original arrow order.
pub fn abelianize(q: &Quiver, d: &[u32], zeta: &[Rational]) -> Result<Vec<AbelianizationTerm>> {
    q.validate(false)?;
    check_normalized(d, zeta)?;
    let choices: Vec<Vec<Vec<u32>>> = d.iter().map(|&di| partitions(di)).collect();
    let mut terms = Vec::new();
    let mut idx = vec![0usize; d.len()];
    loop {
        let mults: Vec<Vec<u32>> = idx.iter().zip(&choices).map(|(&k, c)| c[k].clone()).collect();
        terms.push(blow_up(q, d, zeta, mults));
        let mut pos = d.len();
        loop {
            if pos == 0 {
                return Ok(terms);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

fn blow_up(q: &Quiver, d: &[u32], zeta: &[Rational], mults: Vec<Vec<u32>>) -> AbelianizationTerm {
    let mut origin = Vec::new();
    let mut names = Vec::new();
    let mut copies: Vec<Vec<usize>> = vec![Vec::new(); d.len()];
    for (i, m) in mults.iter().enumerate() {
        for (l, &ml) in m.iter().enumerate() {
            for k in 1..=ml {
                let l = l as u32 + 1;
                copies[i].push(origin.len());
                origin.push((i, l, k));
                names.push(if d[i] == 1 { q.name(i).to_string() } else { format!("{}[{l}.{k}]", q.name(i)) });
            }
        }
    }
    let mut arrows = Vec::new();
    for &(t, h) in q.arrows() {
        for &a in &copies[t] {
            for &b in &copies[h] {
                let n = origin[a].1 * origin[b].1;
                arrows.extend(std::iter::repeat((a, b)).take(n as usize));
            }
        }
    }
    let stability = origin.iter().map(|&(i, l, _)| int(l as i64) * &zeta[i]).collect();
    AbelianizationTerm {
        quiver: Quiver::new(names, arrows).expect("indices in range"),
        dimension: vec![1; origin.len()],
        stability,
        coefficient: coefficient(d, &mults),
        multiplicities: mults,
        origin,
    }
}
