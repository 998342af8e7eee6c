//! Quivers, dimension vectors, stabilities, spanning trees and abelianization.

mod abelian;
mod trees;

pub use abelian::{abelianize, partitions, AbelianizationTerm};
pub use trees::{spanning_trees, stable_trees, tree_components, weist_count, SpanningTree};

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{int, Rational};

/// Per-vertex dimensions, indexed like the quiver's vertices.
pub type DimVector = Vec<u32>;

/// Per-vertex stability parameters, indexed like the quiver's vertices.
pub type Stability = Vec<Rational>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<(usize, usize)>,
}

impl Quiver {
    /// Arrows are `(tail, head)` index pairs. Structure is not validated here;
    /// see [`Quiver::validate`].
    pub fn new(vertices: Vec<String>, arrows: Vec<(usize, usize)>) -> Result<Self> {
        for &(t, h) in &arrows {
            for v in [t, h] {
                if v >= vertices.len() {
                    return Err(Error::UnknownVertex(v.to_string()));
                }
            }
        }
        Ok(Quiver { vertices, arrows })
    }

    pub fn from_names(vertices: &[&str], arrows: &[(&str, &str)]) -> Result<Self> {
        let names: Vec<String> = vertices.iter().map(|s| s.to_string()).collect();
        let idx = |s: &str| {
            names.iter().position(|v| v == s).ok_or_else(|| Error::UnknownVertex(s.to_string()))
        };
        let arrows = arrows.iter().map(|(t, h)| Ok((idx(t)?, idx(h)?))).collect::<Result<_>>()?;
        Quiver::new(names, arrows)
    }

    /// `K(l1, l2)`: sources `i1..`, sinks `j1..`, one arrow from every source to every sink.
    pub fn bipartite(l1: usize, l2: usize) -> Self {
        let mut vertices: Vec<String> = (1..=l1).map(|i| format!("i{i}")).collect();
        vertices.extend((1..=l2).map(|j| format!("j{j}")));
        let arrows = (0..l1).flat_map(|i| (0..l2).map(move |j| (i, l1 + j))).collect();
        Quiver { vertices, arrows }
    }

    /// Two vertices with `m` parallel arrows `1 -> 2`.
    pub fn kronecker(m: usize) -> Self {
        Quiver { vertices: vec!["1".into(), "2".into()], arrows: vec![(0, 1); m] }
    }

    /// The oriented path `1 -> 2 -> ... -> n`.
    pub fn path(n: usize) -> Self {
        Quiver {
            vertices: (1..=n).map(|v| v.to_string()).collect(),
            arrows: (0..n.saturating_sub(1)).map(|v| (v, v + 1)).collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.vertices.iter().position(|v| v == name).ok_or_else(|| Error::UnknownVertex(name.into()))
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(t, h) in &self.arrows {
                for (a, b) in [(t, h), (h, t)] {
                    if a == v && !seen[b] {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    fn find_cycle(&self) -> Option<Vec<usize>> {
        // 0 = unvisited, 1 = on stack, 2 = done
        let n = self.vertices.len();
        let mut state = vec![0u8; n];
        let mut parent = vec![usize::MAX; n];
        for start in 0..n {
            if state[start] != 0 {
                continue;
            }
            let mut stack = vec![(start, 0usize)];
            state[start] = 1;
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                let out: Vec<usize> = self.arrows.iter().filter(|a| a.0 == v).map(|a| a.1).collect();
                if *next < out.len() {
                    let w = out[*next];
                    *next += 1;
                    match state[w] {
                        0 => {
                            state[w] = 1;
                            parent[w] = v;
                            stack.push((w, 0));
                        }
                        1 => {
                            let mut cycle = vec![w];
                            let mut u = v;
                            while u != w {
                                cycle.push(u);
                                u = parent[u];
                            }
                            cycle.reverse();
                            cycle.rotate_right(1);
                            return Some(cycle);
                        }
                        _ => {}
                    }
                } else {
                    state[v] = 2;
                    stack.pop();
                }
            }
        }
        None
    }

    /// Rejects loops and oriented cycles, and disconnected quivers when asked.
    pub fn validate(&self, require_connected: bool) -> Result<()> {
        if let Some((i, &(t, _))) = self.arrows.iter().enumerate().find(|(_, a)| a.0 == a.1) {
            return Err(Error::HasLoop { arrow: i, vertex: self.vertices[t].clone() });
        }
        if let Some(c) = self.find_cycle() {
            return Err(Error::HasOrientedCycle(c.into_iter().map(|v| self.vertices[v].clone()).collect()));
        }
        if require_connected && !self.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(())
    }

    /// One arrow per `(tail, head)` pair in first-occurrence order, with multiplicities
    /// and the original arrows each reduced arrow stands for.
    pub fn reduced(&self) -> (Quiver, Vec<u32>, Vec<Vec<usize>>) {
        let mut index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut arrows = Vec::new();
        let mut preimages: Vec<Vec<usize>> = Vec::new();
        for (i, &a) in self.arrows.iter().enumerate() {
            let k = *index.entry(a).or_insert_with(|| {
                arrows.push(a);
                preimages.push(Vec::new());
                arrows.len() - 1
            });
            preimages[k].push(i);
        }
        let mult = preimages.iter().map(|p| p.len() as u32).collect();
        (Quiver { vertices: self.vertices.clone(), arrows }, mult, preimages)
    }

    /// `<a, b> = #(b -> a) - #(a -> b)`.
    pub fn skew_euler_form(&self, a: usize, b: usize) -> Result<i64> {
        let n = self.vertices.len();
        if a >= n || b >= n {
            return Err(Error::UnknownVertex(a.max(b).to_string()));
        }
        let count = |t: usize, h: usize| self.arrows.iter().filter(|&&x| x == (t, h)).count() as i64;
        Ok(count(b, a) - count(a, b))
    }

    /// The full subquiver on the vertices with `keep[v]`, and the old index of each new vertex.
    pub fn restrict(&self, keep: &[bool]) -> (Quiver, Vec<usize>) {
        let old: Vec<usize> = (0..self.vertices.len()).filter(|&v| keep[v]).collect();
        let mut new_index = vec![usize::MAX; self.vertices.len()];
        for (i, &v) in old.iter().enumerate() {
            new_index[v] = i;
        }
        let arrows = self
            .arrows
            .iter()
            .filter(|(t, h)| keep[*t] && keep[*h])
            .map(|(t, h)| (new_index[*t], new_index[*h]))
            .collect();
        let vertices = old.iter().map(|&v| self.vertices[v].clone()).collect();
        (Quiver { vertices, arrows }, old)
    }
}

/// `sum_v d_v theta_v`.
pub fn pairing(d: &[u32], theta: &[Rational]) -> Rational {
    d.iter().zip(theta).map(|(&k, t)| int(k as i64) * t).sum()
}

pub fn check_normalized(d: &[u32], theta: &[Rational]) -> Result<()> {
    let s = pairing(d, theta);
    if s.is_zero() {
        Ok(())
    } else {
        Err(Error::NotNormalized(crate::exact::fmt_rational(&s)))
    }
}

/// `D = sum_arrows d_t d_h - |d| + 1`.
pub fn moduli_dimension(q: &Quiver, d: &[u32]) -> i64 {
    let arrows: i64 = q.arrows().iter().map(|&(t, h)| d[t] as i64 * d[h] as i64).sum();
    arrows - d.iter().map(|&x| x as i64).sum::<i64>() + 1
}
