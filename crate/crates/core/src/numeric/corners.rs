//! Critical points at the corners `z ∈ {±1}^d` of the real torus.
//!
//! Since `H(z)^T = H(z^{-1})`, every `z_i ∂Φ/∂z_i` vanishes where `z = z^{-1}`;
//! there `H` is real symmetric, so each eigenvalue gives a critical point.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::dispersion::{floquet_matrix_numeric, CriticalPointSystem};
use crate::error::{Error, Result};
use crate::graph::PeriodicGraph;
use crate::laurent::Params;

/// Corner points must solve the system to this relative size.
pub const CORNER_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CornerPoint {
    pub z: Vec<i8>,
    pub lambda: f64,
    /// Largest absolute value of the critical point equations.
    pub residual: f64,
    /// The same, relative to the size of the terms; this is what is checked.
    pub relative_residual: f64,
}

/// All `2^d` sign vectors in lexicographic order with `−1 < +1`.
pub fn corners(d: usize) -> Vec<Vec<i8>> {
    (0..1usize << d)
        .map(|m| {
            (0..d)
                .map(|i| if m >> (d - 1 - i) & 1 == 1 { 1 } else { -1 })
                .collect()
        })
        .collect()
}

/// Largest absolute value of the equations of `system` at `point = (z, λ)`.
pub fn residual(system: &CriticalPointSystem, params: &Params, point: &[Complex64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for eq in &system.equations {
        worst = worst.max(eq.specialize(params)?.evaluate(point)?.norm());
    }
    Ok(worst)
}

/// Largest residual of `system` at `point = (z, λ)`, each equation scaled by
/// the sum of the absolute values of its terms there.
pub fn relative_residual(
    system: &CriticalPointSystem,
    params: &Params,
    point: &[Complex64],
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for eq in &system.equations {
        let f = eq.specialize(params)?;
        let v = f.evaluate(point)?.norm();
        let m = f.magnitude(point);
        worst = worst.max(if m == 0.0 { v } else { v / m });
    }
    Ok(worst)
}

/// Eigenvalues of `H(z0)` at every corner, each checked against `system`.
pub fn corner_critical_points(
    g: &PeriodicGraph,
    system: &CriticalPointSystem,
    params: &Params,
) -> Result<Vec<CornerPoint>> {
    let d = g.dim();
    let mut out = Vec::new();
    for z in corners(d) {
        let zc: Vec<Complex64> = z.iter().map(|&s| Complex64::new(s as f64, 0.0)).collect();
        let h = floquet_matrix_numeric(g, params, &zc)?;
        let real = DMatrix::from_fn(h.nrows(), h.ncols(), |i, j| h[(i, j)].re);
        let mut eig: Vec<f64> = SymmetricEigen::new(real)
            .eigenvalues
            .iter()
            .copied()
            .collect();
        eig.sort_by(f64::total_cmp);
        for lambda in eig {
            let mut point = zc.clone();
            point.push(Complex64::new(lambda, 0.0));
            let rel = relative_residual(system, params, &point)?;
            if rel > CORNER_TOL {
                return Err(Error::Invariant(format!(
                    "corner {z:?}, λ = {lambda} fails the critical point equations \
                     (relative residual {rel:e})"
                )));
            }
            out.push(CornerPoint {
                z: z.clone(),
                lambda,
                residual: residual(system, params, &point)?,
                relative_residual: rel,
            });
        }
    }
    Ok(out)
}

/// Number of distinct corner points (eigenvalues merged to relative 1e-9).
pub fn distinct_corner_count(points: &[CornerPoint]) -> usize {
    let mut n = 0;
    for (i, p) in points.iter().enumerate() {
        let dup = points[..i]
            .iter()
            .any(|q| q.z == p.z && (q.lambda - p.lambda).abs() <= 1e-9 * p.lambda.abs().max(1.0));
        if !dup {
            n += 1;
        }
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::{critical_point_system, dispersion_polynomial};
    use crate::graph::{build_quotient_graph, parse_graph};
    use num_rational::BigRational;

    const HEX: &str = r#"{"d":2,"vertices":["u","v"],"edges":[
        {"from":"u","to":"v","shift":[0,0],"weight":"a"},
        {"from":"u","to":"v","shift":[-1,0],"weight":"b"},
        {"from":"u","to":"v","shift":[0,-1],"weight":"c"}]}"#;

    fn setup(vals: &[(&str, i64)]) -> (PeriodicGraph, CriticalPointSystem, Params) {
        let g = parse_graph(HEX).unwrap();
        let phi = dispersion_polynomial(&build_quotient_graph(&g)).unwrap();
        let params = vals
            .iter()
            .map(|(k, v)| (k.to_string(), BigRational::from_integer((*v).into())))
            .collect();
        (g, critical_point_system(&phi).unwrap(), params)
    }

    #[test]
    fn hexagonal_at_the_identity() {
        let (g, sys, p) = setup(&[("a", 1), ("b", 1), ("c", 1), ("V_u", 1), ("V_v", 0)]);
        let pts = corner_critical_points(&g, &sys, &p).unwrap();
        assert_eq!(pts.len(), 8);
        let at_one: Vec<f64> = pts
            .iter()
            .filter(|c| c.z == [1, 1])
            .map(|c| c.lambda)
            .collect();
        let r = 37f64.sqrt();
        assert!((at_one[0] - (1.0 - r) / 2.0).abs() < 1e-12);
        assert!((at_one[1] - (1.0 + r) / 2.0).abs() < 1e-12);
        assert!(pts.iter().all(|c| c.residual < 1e-8));
    }

    #[test]
    fn no_hopping_gives_the_potentials() {
        let (g, sys, p) = setup(&[("a", 0), ("b", 0), ("c", 0), ("V_u", 3), ("V_v", -2)]);
        let pts = corner_critical_points(&g, &sys, &p).unwrap();
        for c in &pts {
            assert!(c.lambda == 3.0 || c.lambda == -2.0);
        }
        assert_eq!(distinct_corner_count(&pts), 8);
    }

    #[test]
    fn generic_points_are_not_critical() {
        let (_, sys, p) = setup(&[("a", 2), ("b", 3), ("c", 5), ("V_u", 1), ("V_v", 4)]);
        let pt = [
            Complex64::new(0.3, 0.7),
            Complex64::new(-1.1, 0.2),
            Complex64::new(2.5, -0.4),
        ];
        assert!(residual(&sys, &p, &pt).unwrap() > 1e-3);
    }

    #[test]
    fn corner_order() {
        assert_eq!(
            corners(2),
            vec![vec![-1, -1], vec![-1, 1], vec![1, -1], vec![1, 1]]
        );
        assert_eq!(corners(1).len(), 2);
    }
}
