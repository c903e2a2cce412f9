//! Critical point degree bounds for discrete periodic operators.
//!
//! Pipeline: a Z^d-periodic graph is turned into its labeled quotient graph,
//! the dispersion polynomial is expanded over cycle covers, and the faces of
//! its Newton polytope are analysed through initial graphs. The
//! [`bounds`] module combines the pieces into an upper bound on the number
//! of critical points of `λ` on the Bloch variety.

pub mod analysis;
pub mod bounds;
pub mod dispersion;
pub mod error;
pub mod graph;
pub mod hull;
pub mod initial;
pub mod lattice;
pub mod laurent;
pub mod numeric;
pub mod params;
pub mod planar;
pub mod polytope;
pub mod report;

pub use error::{Error, Result};
pub use laurent::{LaurentPoly, ParamMonomial, ParamPoly, Params, RatLaurent, SymbolicMatrix};
