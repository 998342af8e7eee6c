//! Rank-2 tropical vertex: wall crossings, loop products, consistent completion
//! of bipartite initial data and extraction of log coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{factorial, int, Rational, SeriesMonomial, TruncatedSeries};
use crate::quiver::{moduli_dimension, Quiver};
use crate::quiver_jk::jk_ab_infinity;

pub type Direction = (i64, i64);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Support {
    Line,
    Ray,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    pub direction: Direction,
    pub support: Support,
    pub function: TruncatedSeries,
}

impl Wall {
    pub fn new(direction: Direction, support: Support, function: TruncatedSeries) -> Result<Self> {
        if direction == (0, 0) || direction.0.gcd(&direction.1) != 1 {
            return Err(Error::Invalid(format!("wall direction {direction:?} is not primitive")));
        }
        Ok(Wall { direction, support, function })
    }
}

fn det(a: Direction, b: Direction) -> i64 {
    a.0 * b.1 - a.1 * b.0
}

pub fn primitive(v: Direction) -> (Direction, i64) {
    let g = v.0.gcd(&v.1);
    if g == 0 {
        return ((0, 0), 0);
    }
    ((v.0 / g, v.1 / g), g)
}

/// Loops start just clockwise of the positive x-axis, along `(1, -1)`.
const START: Direction = (1, -1);

/// Counterclockwise angle order measured from the loop's starting direction.
pub fn angle_cmp(a: Direction, b: Direction) -> Ordering {
    let half = |v: Direction| {
        let c = det(START, v);
        let dot = START.0 * v.0 + START.1 * v.1;
        if c > 0 || (c == 0 && dot > 0) {
            0
        } else {
            1
        }
    };
    half(a).cmp(&half(b)).then_with(|| 0.cmp(&det(a, b)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Positive,
    Negative,
}

/// Counterclockwise crossing of a ray along `r` maps `z^m -> z^m f^(det(r, m))`.
const CCW: Orientation = Orientation::Positive;

/// `x -> x f^(+-det(r, (1,0)))`, `y -> y f^(+-det(r, (0,1)))` applied to `g`.
pub fn cross_wall(w: &Wall, g: &TruncatedSeries, orientation: Orientation) -> Result<TruncatedSeries> {
    cross_ray(w.direction, &w.function, g, orientation)
}

fn cross_ray(r: Direction, f: &TruncatedSeries, g: &TruncatedSeries, o: Orientation) -> Result<TruncatedSeries> {
    let s = if o == Orientation::Positive { 1 } else { -1 };
    g.substitute_xy(f, s * det(r, (1, 0)), s * det(r, (0, 1)))
}

/// Images of `x` and `y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    pub x: TruncatedSeries,
    pub y: TruncatedSeries,
}

impl Automorphism {
    pub fn identity(nparams: usize, cutoff: u32) -> Self {
        let z = vec![0; nparams];
        Automorphism {
            x: TruncatedSeries::monomial(nparams, cutoff, z.clone(), 1, 0, Rational::one()),
            y: TruncatedSeries::monomial(nparams, cutoff, z, 0, 1, Rational::one()),
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.x.nparams(), self.x.cutoff())
    }

    /// `(x^-1 P(x) - 1, y^-1 P(y) - 1)`.
    pub fn defect(&self) -> (TruncatedSeries, TruncatedSeries) {
        let n = self.x.nparams();
        let c = self.x.cutoff();
        let one = TruncatedSeries::one(n, c);
        let xi = TruncatedSeries::monomial(n, c, vec![0; n], -1, 0, Rational::one());
        let yi = TruncatedSeries::monomial(n, c, vec![0; n], 0, -1, Rational::one());
        (self.x.mul(&xi).sub(&one), self.y.mul(&yi).sub(&one))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScatteringDiagram {
    nparams: usize,
    cutoff: u32,
    walls: Vec<Wall>,
}

impl ScatteringDiagram {
    pub fn new(nparams: usize, cutoff: u32) -> Result<Self> {
        if cutoff == 0 {
            return Err(Error::BadCutoff);
        }
        Ok(ScatteringDiagram { nparams, cutoff, walls: Vec::new() })
    }

    pub fn nparams(&self) -> usize {
        self.nparams
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn walls(&self) -> &[Wall] {
        &self.walls
    }

    /// Adds a wall, multiplying into an existing wall with the same direction and support.
    pub fn insert(&mut self, w: Wall) {
        let f = w.function.with_cutoff(self.cutoff);
        if let Some(old) = self.walls.iter_mut().find(|o| o.direction == w.direction && o.support == w.support) {
            old.function = old.function.mul(&f);
            return;
        }
        self.walls.push(Wall { function: f, ..w });
        self.walls.sort_by(|a, b| angle_cmp(a.direction, b.direction).then(a.support.cmp(&b.support)));
    }

    /// Ray with the given primitive direction, if present.
    pub fn ray(&self, direction: Direction) -> Option<&Wall> {
        self.walls.iter().find(|w| w.direction == direction && w.support == Support::Ray)
    }

    pub fn rays(&self) -> impl Iterator<Item = &Wall> {
        self.walls.iter().filter(|w| w.support == Support::Ray)
    }

    /// Every half-ray with its function, ordered counterclockwise from the start.
    fn crossings(&self) -> Vec<(Direction, &TruncatedSeries)> {
        let mut out = Vec::new();
        for w in &self.walls {
            out.push((w.direction, &w.function));
            if w.support == Support::Line {
                out.push(((-w.direction.0, -w.direction.1), &w.function));
            }
        }
        out.sort_by(|a, b| angle_cmp(a.0, b.0));
        out
    }
}

pub fn init_bipartite(l1: usize, l2: usize, cutoff: u32) -> Result<ScatteringDiagram> {
    if l1 == 0 || l2 == 0 {
        return Err(Error::Invalid("bipartite data needs l1, l2 >= 1".into()));
    }
    let n = l1 + l2;
    let mut d = ScatteringDiagram::new(n, cutoff)?;
    let mut fx = TruncatedSeries::one(n, cutoff);
    for i in 0..l1 {
        fx = fx.mul(&TruncatedSeries::one(n, cutoff).add(&TruncatedSeries::param_term(n, cutoff, i, 1, 0, int(1))));
    }
    let mut fy = TruncatedSeries::one(n, cutoff);
    for j in 0..l2 {
        fy = fy.mul(&TruncatedSeries::one(n, cutoff).add(&TruncatedSeries::param_term(n, cutoff, l1 + j, 0, 1, int(1))));
    }
    d.insert(Wall::new((1, 0), Support::Line, fx)?);
    d.insert(Wall::new((0, 1), Support::Line, fy)?);
    Ok(d)
}

/// Composite of the crossings along one counterclockwise loop, truncated at `cutoff`.
pub fn loop_product_at(d: &ScatteringDiagram, cutoff: u32) -> Result<Automorphism> {
    let mut p = Automorphism::identity(d.nparams, cutoff);
    for (r, f) in d.crossings() {
        let f = f.with_cutoff(cutoff);
        p.x = cross_ray(r, &f, &p.x, CCW)?;
        p.y = cross_ray(r, &f, &p.y, CCW)?;
    }
    Ok(p)
}

pub fn loop_product(d: &ScatteringDiagram) -> Result<Automorphism> {
    loop_product_at(d, d.cutoff)
}

/// Consistent completion, order by order in the parameter degree.
pub fn scatter(d0: &ScatteringDiagram) -> Result<ScatteringDiagram> {
    let mut d = d0.clone();
    let n = d.nparams;
    for j in 1..=d.cutoff {
        let p = loop_product_at(&d, j)?;
        let (gx, gy) = p.defect();
        if gx.terms().chain(gy.terms()).any(|(m, _)| m.degree() < j) {
            return Err(Error::Invalid(format!("loop defect below degree {j}")));
        }
        // new ray terms c z^(k r): a ccw crossing shifts the x-defect by -r_y c and the y-defect by r_x c, so both must cancel
        let mut monomials: BTreeMap<(Vec<u32>, i64, i64), ()> = BTreeMap::new();
        for (m, _) in gx.terms().chain(gy.terms()) {
            monomials.insert((m.params.clone(), m.x, m.y), ());
        }
        let mut increments: BTreeMap<Direction, TruncatedSeries> = BTreeMap::new();
        for (params, mx, my) in monomials.into_keys() {
            let m = SeriesMonomial { params: params.clone(), x: mx, y: my };
            let (a, b) = (gx.coefficient(&m), gy.coefficient(&m));
            let (r, _) = primitive((mx, my));
            if r.0 <= 0 || r.1 <= 0 {
                return Err(Error::Invalid(format!("loop defect at exponent ({mx},{my}) outside the open quadrant")));
            }
            let c = -&b / int(r.0);
            if a != &c * int(r.1) {
                return Err(Error::Invalid(format!("loop defect at exponent ({mx},{my}) is not a wall increment")));
            }
            increments
                .entry(r)
                .or_insert_with(|| TruncatedSeries::zero(n, d.cutoff))
                .add_term(m, c);
        }
        let mut dirs: Vec<Direction> = increments.keys().copied().collect();
        dirs.sort_by(|a, b| angle_cmp(*a, *b));
        for r in dirs {
            let f = TruncatedSeries::one(n, d.cutoff).add(&increments[&r]);
            d.insert(Wall::new(r, Support::Ray, f)?);
        }
    }
    Ok(d)
}

/// Splits a bipartite dimension vector into its parameter degrees `(|P1|, |P2|)`.
fn bidegree(l1: usize, dim: &[u32]) -> (i64, i64) {
    let a = dim[..l1].iter().map(|&x| x as i64).sum();
    let b = dim[l1..].iter().map(|&x| x as i64).sum();
    (a, b)
}

/// `[s^P1 t^P2 x^(ka) y^(kb)] log f_(a,b) / k` for `dim = (P1, P2)`, `|d| = k (a, b)`.
pub fn extract_cd(d: &ScatteringDiagram, l1: usize, dim: &[u32]) -> Result<Rational> {
    if dim.len() != d.nparams || l1 > dim.len() {
        return Err(Error::Invalid(format!("dimension vector needs {} entries", d.nparams)));
    }
    let (a, b) = bidegree(l1, dim);
    if a == 0 || b == 0 {
        return Err(Error::Invalid("dimension vector must be nonzero on both sides".into()));
    }
    let total = (a + b) as u32;
    if total > d.cutoff {
        return Err(Error::CutoffTooSmall { degree: total, cutoff: d.cutoff });
    }
    let (r, k) = primitive((a, b));
    let Some(w) = d.ray(r) else {
        return Ok(Rational::zero());
    };
    let m = SeriesMonomial { params: dim.to_vec(), x: a, y: b };
    Ok(w.function.log()?.coefficient(&m) / int(k))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub pass: bool,
    /// `c_d` from the scattering diagram.
    pub lhs: Rational,
    /// `(-1)^D / d! * JK_ab^infinity`.
    pub rhs: Rational,
    pub moduli_dimension: i64,
    pub jk_infinity: Rational,
}

/// Right-hand side `(-1)^D / d! * JK_ab^infinity(K(l1,l2), d, zeta)`.
pub fn main_theorem_rhs(l1: usize, l2: usize, dim: &[u32], zeta: &[Rational]) -> Result<(Rational, i64, Rational)> {
    let q = Quiver::bipartite(l1, l2);
    if dim.len() != l1 + l2 || zeta.len() != l1 + l2 {
        return Err(Error::Invalid(format!("K({l1},{l2}) needs vectors of length {}", l1 + l2)));
    }
    let src = &zeta[..l1];
    let snk = &zeta[l1..];
    if src.iter().any(|z| *z != src[0]) || snk.iter().any(|z| *z != snk[0]) {
        return Err(Error::Invalid("stability must be constant on sources and on sinks".into()));
    }
    if zeta.iter().all(|z| z.is_zero()) {
        return Err(Error::Invalid("stability is trivial".into()));
    }
    let jk = jk_ab_infinity(&q, dim, zeta)?;
    let dd = moduli_dimension(&q, dim);
    let fact = dim.iter().fold(num_bigint::BigInt::one(), |acc, &x| acc * factorial(x));
    let sign = int(if dd.rem_euclid(2) == 0 { 1 } else { -1 });
    Ok((sign * &jk / Rational::from_integer(fact), dd, jk))
}

/// Compares `c_d` read off an already scattered diagram with the JK side.
pub fn verify_main_theorem_on(d: &ScatteringDiagram, l1: usize, l2: usize, dim: &[u32], zeta: &[Rational]) -> Result<Verdict> {
    let (rhs, dd, jk) = main_theorem_rhs(l1, l2, dim, zeta)?;
    let lhs = extract_cd(d, l1, dim)?;
    Ok(Verdict { pass: lhs == rhs, lhs, rhs, moduli_dimension: dd, jk_infinity: jk })
}

pub fn verify_main_theorem(l1: usize, l2: usize, dim: &[u32], zeta: &[Rational], cutoff: u32) -> Result<Verdict> {
    // the JK side goes first so stability errors surface before the scattering work
    main_theorem_rhs(l1, l2, dim, zeta)?;
    let d = scatter(&init_bipartite(l1, l2, cutoff)?)?;
    verify_main_theorem_on(&d, l1, l2, dim, zeta)
}
