//! Exact Jeffrey-Kirwan residues of quiver gauge theories, their abelianization,
//! and consistent completion of rank-2 scattering diagrams.
//!
//! Every number in this crate is an exact rational.

pub mod arrangement;
pub mod error;
pub mod exact;
pub mod quiver;
pub mod quiver_jk;
pub mod scattering;

pub use error::{Error, Result, Witness};
pub use exact::{LinForm, Poly, Rational, RationalExpr, TruncatedSeries, Var};
