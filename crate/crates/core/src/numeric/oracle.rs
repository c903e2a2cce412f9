//! Independent count of critical points for one-dimensional graphs.
//!
//! With `d = 1` the critical point equations are `Φ` and `x ∂Φ/∂x` in
//! `(x, λ)`. `Φ` is monic in `λ`, so no solution escapes to `λ = ∞`, and the
//! resultant `R(x) = Res_λ(Φ, x Φ_x)` has, at each `x0 ∈ C^×`, order equal to
//! the sum of intersection multiplicities over `x0`. Its degree (after
//! removing the powers of `x`) is therefore the count with multiplicity.
//! When that many distinct solutions are found, each one is simple.

use num_complex::Complex64;
use serde::Serialize;

use super::bivariate::common_zeros;
use crate::dispersion::dispersion_polynomial;
use crate::error::{Error, Result};
use crate::graph::{build_quotient_graph, PeriodicGraph};
use crate::laurent::Params;

/// Largest number of vertices the oracle accepts.
pub const ORACLE_VERTEX_LIMIT: usize = 4;

#[derive(Debug, Clone, Serialize)]
pub struct OracleCount {
    /// Critical points, all certified simple.
    pub count: usize,
    #[serde(skip)]
    pub points: Vec<[Complex64; 2]>,
    pub max_residual: f64,
}

pub fn cpdeg_oracle_d1(g: &PeriodicGraph, params: &Params) -> Result<OracleCount> {
    if g.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: g.dim(),
        });
    }
    if g.num_vertices() > ORACLE_VERTEX_LIMIT {
        return Err(Error::SizeGuard {
            what: "vertex count for the d = 1 oracle",
            got: g.num_vertices(),
            limit: ORACLE_VERTEX_LIMIT,
        });
    }
    let phi = dispersion_polynomial(&build_quotient_graph(g))?;
    let f = phi.specialize(params)?;
    let fx = f.log_derivative(0);
    if fx.is_zero() {
        return Err(Error::Degenerate("Φ does not depend on x".into()));
    }
    let sol = common_zeros(&f, &fx, false)?;
    let total = sol.resultant.degree().unwrap_or(0);
    if sol.points.len() != total {
        return Err(Error::Degenerate(format!(
            "found {} distinct critical points but the resultant counts {total} \
             with multiplicity; simplicity cannot be certified",
            sol.points.len()
        )));
    }
    Ok(OracleCount {
        count: total,
        points: sol.points,
        max_residual: sol.max_residual,
    })
}
