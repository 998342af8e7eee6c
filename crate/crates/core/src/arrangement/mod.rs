//! Hyperplane arrangements of quiver gauge theories and Jeffrey-Kirwan residues.

mod flags;
mod jk;
mod regularity;

pub use flags::{enumerate_flags, flag_residue, Flag};
pub use jk::{jk_basis, jk_global, jk_zeta, quiver_zeta};
pub use regularity::{regularity, RegularityMode};

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::{fmt_rational, int, linalg, LinForm, Rational};
use crate::quiver::Quiver;

/// Denominator of sampled R-charges.
pub const RCHARGE_DENOMINATOR: i64 = 1 << 31;
/// Resampling budget when a sample is degenerate.
pub const RCHARGE_ATTEMPTS: u32 = 32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RCharges {
    /// One value per charged arrow (original arrows when split, reduced arrows otherwise).
    Explicit(Vec<Rational>),
    Seed(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ChargeMode {
    /// Independent charge per original arrow; parallel arrows give distinct hyperplanes.
    #[default]
    Split,
    /// One charge per reduced arrow, weight factors raised to the multiplicity.
    Literal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weight {
    pub form: LinForm,
    pub multiplicity: u32,
    pub rcharge: Rational,
    /// Index into [`Arrangement::rcharges`].
    pub charge: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    pub n: usize,
    /// `(vertex, index)` of each variable.
    pub coords: Vec<(usize, u32)>,
    pub reference: (usize, u32),
    pub weights: Vec<Weight>,
    pub roots: Vec<LinForm>,
    pub rcharges: Vec<Rational>,
    pub mode: ChargeMode,
}

/// An affine hyperplane `form + constant = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperplane {
    pub form: LinForm,
    pub constant: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularPoint {
    pub location: Vec<Rational>,
    /// Indices into [`Arrangement::hyperplanes`].
    pub active: Vec<usize>,
}

/// Charged arrows: `(tail, head, multiplicity)` in charge order.
fn charged_arrows(q: &Quiver, mode: ChargeMode) -> Vec<(usize, usize, u32)> {
    match mode {
        ChargeMode::Split => q.arrows().iter().map(|&(t, h)| (t, h, 1)).collect(),
        ChargeMode::Literal => {
            let (r, m, _) = q.reduced();
            r.arrows().iter().zip(m).map(|(&(t, h), m)| (t, h, m)).collect()
        }
    }
}

impl Arrangement {
    /// Weight hyperplanes in order, then roots.
    pub fn hyperplanes(&self) -> Vec<Hyperplane> {
        let mut out: Vec<Hyperplane> = self
            .weights
            .iter()
            .map(|w| Hyperplane { form: w.form.clone(), constant: w.rcharge.clone() })
            .collect();
        out.extend(self.roots.iter().map(|r| Hyperplane { form: r.clone(), constant: int(-1) }));
        out
    }

    /// The same arrangement with every R-charge multiplied by `lambda`.
    pub fn scaled(&self, lambda: &Rational) -> Arrangement {
        let mut a = self.clone();
        a.rcharges = a.rcharges.iter().map(|r| r * lambda).collect();
        for w in &mut a.weights {
            w.rcharge = a.rcharges[w.charge].clone();
        }
        a
    }

    pub fn with_rcharges(&self, rcharges: Vec<Rational>) -> Arrangement {
        let mut a = self.clone();
        for w in &mut a.weights {
            w.rcharge = rcharges[w.charge].clone();
        }
        a.rcharges = rcharges;
        a
    }

    /// Variable id of coordinate `(v, k)`, `None` for the reference.
    pub fn var_of(&self, v: usize, k: u32) -> Option<usize> {
        self.coords.iter().position(|&c| c == (v, k))
    }
}

/// The default reference coordinate: last index of the last vertex with `d > 0`.
pub fn default_reference(d: &[u32]) -> Option<(usize, u32)> {
    let v = (0..d.len()).rev().find(|&v| d[v] > 0)?;
    Some((v, d[v] - 1))
}

/// Roots and weights of `(q, d)` with the reference coordinate set to zero, before
/// any R-charges are chosen (all charges zero).
fn skeleton(q: &Quiver, d: &[u32], reference: (usize, u32), mode: ChargeMode) -> Result<Arrangement> {
    if d.len() != q.vertex_count() {
        return Err(Error::Invalid("dimension vector length differs from vertex count".into()));
    }
    if reference.0 >= d.len() || reference.1 >= d[reference.0] {
        return Err(Error::Invalid("reference coordinate does not exist".into()));
    }
    let coords: Vec<(usize, u32)> = (0..d.len())
        .flat_map(|v| (0..d[v]).map(move |k| (v, k)))
        .filter(|&c| c != reference)
        .collect();
    let form = |v: usize, k: u32| match coords.iter().position(|&c| c == (v, k)) {
        Some(i) => LinForm::var(i),
        None => LinForm::default(),
    };
    let mut roots = Vec::new();
    for v in 0..d.len() {
        for i in 0..d[v] {
            for j in 0..d[v] {
                if i != j {
                    roots.push(form(v, j).sub(&form(v, i)));
                }
            }
        }
    }
    let arrows = charged_arrows(q, mode);
    let mut weights = Vec::new();
    for (c, &(t, h, m)) in arrows.iter().enumerate() {
        for i in 0..d[t] {
            for j in 0..d[h] {
                weights.push(Weight {
                    form: form(h, j).sub(&form(t, i)),
                    multiplicity: m,
                    rcharge: Rational::zero(),
                    charge: c,
                });
            }
        }
    }
    Ok(Arrangement {
        n: coords.len(),
        coords,
        reference,
        weights,
        roots,
        rcharges: vec![Rational::zero(); arrows.len()],
        mode,
    })
}

/// Deterministic sample of `count` charges in `(0, 1)` with denominator `2^31`.
pub fn sample_rcharges(rng: &mut ChaCha8Rng, count: usize) -> Vec<Rational> {
    (0..count)
        .map(|_| Rational::new(BigInt::from(rng.gen_range(1..RCHARGE_DENOMINATOR)), BigInt::from(RCHARGE_DENOMINATOR)))
        .collect()
}

pub fn build_arrangement(
    q: &Quiver,
    d: &[u32],
    reference: Option<(usize, u32)>,
    rcharges: &RCharges,
    mode: ChargeMode,
) -> Result<Arrangement> {
    q.validate(false)?;
    let reference = match reference {
        Some(r) => r,
        None => default_reference(d).ok_or_else(|| Error::Invalid("dimension vector is zero".into()))?,
    };
    let a = skeleton(q, d, reference, mode)?;
    match rcharges {
        RCharges::Explicit(r) => {
            if r.len() != a.rcharges.len() {
                return Err(Error::Invalid(format!(
                    "expected {} R-charges, got {}",
                    a.rcharges.len(),
                    r.len()
                )));
            }
            Ok(a.with_rcharges(r.clone()))
        }
        RCharges::Seed(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut last = String::new();
            for _ in 0..RCHARGE_ATTEMPTS {
                let candidate = a.with_rcharges(sample_rcharges(&mut rng, a.rcharges.len()));
                match singular_points(&candidate) {
                    Ok(_) => return Ok(candidate),
                    Err(Error::DegenerateRCharges(why)) => last = why,
                    Err(e) => return Err(e),
                }
            }
            Err(Error::DegenerateRCharges(format!("{RCHARGE_ATTEMPTS} samples failed; last: {last}")))
        }
    }
}

fn normalized(h: &Hyperplane) -> (LinForm, Rational) {
    let (c, m) = h.form.normalize();
    (m, &h.constant / c)
}

/// Isolated points where at least `n` independent hyperplanes meet, sorted
/// lexicographically. Coincident hyperplanes, or more than `n` hyperplanes
/// through one point, count as degenerate R-charges.
pub fn singular_points(a: &Arrangement) -> Result<Vec<SingularPoint>> {
    let hs = a.hyperplanes();
    let mut seen = BTreeMap::new();
    for (i, h) in hs.iter().enumerate() {
        if let Some(j) = seen.insert(normalized(h), i) {
            return Err(Error::DegenerateRCharges(format!("hyperplanes {j} and {i} coincide")));
        }
    }
    let n = a.n;
    let rows: Vec<Vec<Rational>> = hs.iter().map(|h| h.form.dense(n)).collect();
    let mut points: BTreeSet<Vec<Rational>> = BTreeSet::new();
    for subset in (0..hs.len()).combinations(n) {
        let m: Vec<Vec<Rational>> = subset.iter().map(|&i| rows[i].clone()).collect();
        let Some(inv) = linalg::inverse(&m) else { continue };
        let rhs: Vec<Rational> = subset.iter().map(|&i| -hs[i].constant.clone()).collect();
        let x: Vec<Rational> = inv.iter().map(|row| linalg::dot(row, &rhs)).collect();
        points.insert(x);
    }
    let mut out = Vec::new();
    for x in points {
        let active: Vec<usize> = (0..hs.len())
            .filter(|&i| (linalg::dot(&rows[i], &x) + &hs[i].constant).is_zero())
            .collect();
        if active.len() > n {
            let loc: Vec<String> = x.iter().map(fmt_rational).collect();
            return Err(Error::DegenerateRCharges(format!(
                "{} hyperplanes meet at ({})",
                active.len(),
                loc.join(",")
            )));
        }
        out.push(SingularPoint { location: x, active });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::frac;

    #[test]
    fn a2_arrangement() {
        let a = build_arrangement(&Quiver::path(2), &[1, 1], None, &RCharges::Explicit(vec![frac(1, 3)]), ChargeMode::Split)
            .unwrap();
        assert_eq!(a.n, 1);
        assert!(a.roots.is_empty());
        assert_eq!(a.weights.len(), 1);
        assert_eq!(a.weights[0].form, LinForm::var(0).scale(&int(-1)));
        let p = singular_points(&a).unwrap();
        assert_eq!(p, vec![SingularPoint { location: vec![frac(1, 3)], active: vec![0] }]);
    }

    #[test]
    fn kronecker_points() {
        let q = Quiver::kronecker(2);
        let a = build_arrangement(&q, &[1, 1], None, &RCharges::Explicit(vec![frac(1, 3), frac(1, 7)]), ChargeMode::Split)
            .unwrap();
        assert_eq!(a.weights.len(), 2);
        let p = singular_points(&a).unwrap();
        let locs: Vec<Vec<Rational>> = p.iter().map(|s| s.location.clone()).collect();
        assert_eq!(locs, vec![vec![frac(1, 7)], vec![frac(1, 3)]]);
        let same = a.with_rcharges(vec![frac(1, 3), frac(1, 3)]);
        assert!(matches!(singular_points(&same), Err(Error::DegenerateRCharges(_))));
        let lit = build_arrangement(&q, &[1, 1], None, &RCharges::Explicit(vec![frac(1, 3)]), ChargeMode::Literal)
            .unwrap();
        assert_eq!(lit.weights.len(), 1);
        assert_eq!(lit.weights[0].multiplicity, 2);
    }

    #[test]
    fn nonabelian_roots_and_weights() {
        let q = Quiver::bipartite(1, 1);
        let a = build_arrangement(&q, &[2, 1], None, &RCharges::Explicit(vec![frac(2, 5)]), ChargeMode::Split).unwrap();
        assert_eq!(a.n, 2);
        let u1 = LinForm::var(0);
        let u2 = LinForm::var(1);
        assert_eq!(a.roots, vec![u2.sub(&u1), u1.sub(&u2)]);
        let forms: Vec<LinForm> = a.weights.iter().map(|w| w.form.clone()).collect();
        assert_eq!(forms, vec![u1.scale(&int(-1)), u2.scale(&int(-1))]);
        assert_eq!(singular_points(&a).unwrap().len(), 5);
    }

    #[test]
    fn seeded_sampling_is_deterministic() {
        let q = Quiver::bipartite(2, 2);
        let a = build_arrangement(&q, &[1; 4], None, &RCharges::Seed(7), ChargeMode::Split).unwrap();
        let b = build_arrangement(&q, &[1; 4], None, &RCharges::Seed(7), ChargeMode::Split).unwrap();
        assert_eq!(a, b);
        let c = build_arrangement(&q, &[1; 4], None, &RCharges::Seed(8), ChargeMode::Split).unwrap();
        assert_ne!(a.rcharges, c.rcharges);
        for r in &a.rcharges {
            assert_eq!(r.denom() * BigInt::from(1) <= BigInt::from(RCHARGE_DENOMINATOR), true);
        }
    }
}
