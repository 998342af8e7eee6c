use std::fmt;

use thiserror::Error;

use crate::exact::{fmt_rational, Rational};

pub type Result<T> = std::result::Result<T, Error>;

/// Evidence that a stability vector sits on a wall.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// `zeta = sum coefficients[i] * generators[i]` with fewer generators than the ambient dimension.
    Wall {
        zeta: Vec<Rational>,
        generators: Vec<Vec<Rational>>,
        coefficients: Vec<Rational>,
    },
    /// A spanning tree whose coefficient on `arrow` vanishes.
    Tree { tree: Vec<usize>, arrow: usize },
    /// The failure happened inside one abelianization term.
    Term { index: usize, inner: Box<Witness> },
}

fn fmt_vec(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(fmt_rational).collect();
    format!("({})", parts.join(","))
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Wall { zeta, generators, coefficients } => {
                write!(f, "{} =", fmt_vec(zeta))?;
                for (i, (g, c)) in generators.iter().zip(coefficients).enumerate() {
                    let sep = if i == 0 { " " } else { " + " };
                    write!(f, "{sep}{}*{}", fmt_rational(c), fmt_vec(g))?;
                }
                if generators.is_empty() {
                    write!(f, " 0")?;
                }
                Ok(())
            }
            Witness::Tree { tree, arrow } => {
                write!(f, "tree {tree:?} has zero coefficient on arrow {arrow}")
            }
            Witness::Term { index, inner } => write!(f, "abelianization term {index}: {inner}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("denominator factor vanishes identically")]
    ZeroDenominator,
    #[error("basis matrix is singular")]
    SingularBasis,
    #[error("series has the wrong constant term for {0}")]
    BadConstantTerm(&'static str),
    #[error("arrow {arrow} is a loop at vertex {vertex}")]
    HasLoop { arrow: usize, vertex: String },
    #[error("oriented cycle through vertices {0:?}")]
    HasOrientedCycle(Vec<String>),
    #[error("quiver is not connected")]
    Disconnected,
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("stability is not normalized: sum d_v theta_v = {0}")]
    NotNormalized(String),
    #[error("stability is not regular: {0}")]
    NonRegularStability(Witness),
    #[error("R-charges are degenerate: {0}")]
    DegenerateRCharges(String),
    #[error("zeta is not sum-regular: {0}")]
    NotSumRegular(Witness),
    #[error("arrow set is not a spanning tree")]
    NotATree,
    #[error("cutoff must be at least 1 and both sides nonempty")]
    BadCutoff,
    #[error("dimension vector has parameter degree {degree} above cutoff {cutoff}")]
    CutoffTooSmall { degree: u32, cutoff: u32 },
    #[error("invalid input: {0}")]
    Invalid(String),
}
