//! The dispersion polynomial as a sum over directed cycle covers of `Γ̂`,
//! the critical point system, and numeric Floquet matrices.
//!
//! A cycle cover picks, for every vertex `v`, one edge with head `v`, such
//! that the tails are again all of `W`. Its weight is the signed product of
//! the labels, the sign being that of the permutation `head ↦ tail`. Every
//! parallel edge and loop is chosen independently, so `Φ = Σ wt(ζ)` has no
//! cancellation between covers with distinct monomials.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::{EdgeLabel, PeriodicGraph, QuotientGraph};
use crate::laurent::{permutation_sign, rat_to_f64, LaurentPoly, Params};

pub const COVER_LIMIT: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleCover {
    /// `edges[v]` is the index (into `QuotientGraph::edges`) of the edge with head `v`.
    pub edges: Vec<usize>,
    /// `perm[v]` is the tail of `edges[v]`.
    pub perm: Vec<usize>,
    pub sign: i8,
    /// Signed single-term weight.
    pub weight: LaurentPoly,
}

impl CycleCover {
    /// Cycle lengths of the underlying permutation.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let n = self.perm.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut v = s;
            while !seen[v] {
                seen[v] = true;
                v = self.perm[v];
                len += 1;
            }
            out.push(len);
        }
        out
    }

    /// The exponent vector of `wt(ζ)`.
    pub fn exponent(&self) -> Vec<i64> {
        self.weight
            .support()
            .pop()
            .expect("cover weights are nonzero")
    }
}

/// All cycle covers, in lexicographic order of the chosen edge indices.
pub fn cycle_covers(q: &QuotientGraph) -> Result<Vec<CycleCover>> {
    let n = q.num_vertices();
    if n > COVER_LIMIT {
        return Err(Error::SizeGuard {
            what: "fundamental domain size for cycle-cover enumeration",
            got: n,
            limit: COVER_LIMIT,
        });
    }
    let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, e) in q.edges().iter().enumerate() {
        incoming[e.head].push(i);
    }
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(n);
    let mut used = vec![false; n];
    rec(q, &incoming, &mut chosen, &mut used, &mut out);
    Ok(out)
}

fn rec(
    q: &QuotientGraph,
    incoming: &[Vec<usize>],
    chosen: &mut Vec<usize>,
    used: &mut [bool],
    out: &mut Vec<CycleCover>,
) {
    let n = q.num_vertices();
    let v = chosen.len();
    if v == n {
        let perm: Vec<usize> = chosen.iter().map(|&i| q.edges()[i].tail).collect();
        let sign = permutation_sign(&perm);
        let d = q.dim();
        let mut w = LaurentPoly::one(d);
        for &i in chosen.iter() {
            w = w.mul(&q.edges()[i].weight(d));
        }
        if sign < 0 {
            w = w.neg();
        }
        out.push(CycleCover {
            edges: chosen.clone(),
            perm,
            sign,
            weight: w,
        });
        return;
    }
    for &i in &incoming[v] {
        let t = q.edges()[i].tail;
        if used[t] {
            continue;
        }
        used[t] = true;
        chosen.push(i);
        rec(q, incoming, chosen, used, out);
        chosen.pop();
        used[t] = false;
    }
}

/// `Φ = det(λI − H(z)) = Σ_ζ wt(ζ)`.
pub fn dispersion_polynomial(q: &QuotientGraph) -> Result<LaurentPoly> {
    let mut phi = LaurentPoly::zero(q.dim());
    for c in cycle_covers(q)? {
        phi = phi.add(&c.weight);
    }
    Ok(phi)
}

/// `[Φ, z_1 ∂Φ/∂z_1, …, z_d ∂Φ/∂z_d]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalPointSystem {
    pub equations: Vec<LaurentPoly>,
}

impl CriticalPointSystem {
    pub fn phi(&self) -> &LaurentPoly {
        &self.equations[0]
    }
}

pub fn critical_point_system(phi: &LaurentPoly) -> Result<CriticalPointSystem> {
    if phi.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut equations = vec![phi.clone()];
    for i in 0..phi.dim() {
        equations.push(phi.log_derivative(i));
    }
    Ok(CriticalPointSystem { equations })
}

fn param_f64(params: &Params, s: &str) -> Result<f64> {
    params
        .get(s)
        .map(rat_to_f64)
        .ok_or_else(|| Error::MissingParameter(s.to_string()))
}

/// `H(z)` with numeric parameters.
pub fn floquet_matrix_numeric(
    g: &PeriodicGraph,
    params: &Params,
    z: &[Complex64],
) -> Result<DMatrix<Complex64>> {
    if z.len() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            got: z.len(),
        });
    }
    if let Some(i) = z.iter().position(|c| c.norm() == 0.0) {
        return Err(Error::ZeroCoordinate(i));
    }
    let n = g.num_vertices();
    let mut h = DMatrix::<Complex64>::zeros(n, n);
    for v in 0..n {
        h[(v, v)] += Complex64::new(param_f64(params, g.potential(v))?, 0.0);
    }
    let q = crate::graph::build_quotient_graph(g);
    for e in q.edges() {
        if let EdgeLabel::Hop { weight, shift } = &e.label {
            let w = param_f64(params, weight)?;
            let mut mono = Complex64::new(1.0, 0.0);
            for (zi, &k) in z.iter().zip(shift) {
                mono *= zi.powi(k as i32);
            }
            h[(e.head, e.tail)] -= mono * w;
        }
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_quotient_graph, parse_graph};

    const HEX: &str = r#"{"d":2,"vertices":["u","v"],"edges":[
        {"from":"u","to":"v","shift":[0,0],"weight":"a"},
        {"from":"u","to":"v","shift":[-1,0],"weight":"b"},
        {"from":"u","to":"v","shift":[0,-1],"weight":"c"}]}"#;

    #[test]
    fn hexagonal_cover_count_and_polynomial() {
        let q = build_quotient_graph(&parse_graph(HEX).unwrap());
        let covers = cycle_covers(&q).unwrap();
        assert_eq!(covers.len(), 13);
        let phi = dispersion_polynomial(&q).unwrap();
        let expected = LaurentPoly::parse(
            "lambda^2 - lambda*(V_u + V_v) + V_u*V_v - (a^2 + b^2 + c^2) \
             - a*b*(x + x^-1) - a*c*(y + y^-1) - b*c*(x*y^-1 + y*x^-1)",
            2,
        )
        .unwrap();
        assert_eq!(phi, expected);
        assert_eq!(phi, q.adjacency_matrix().leibniz_det().unwrap());
        assert_eq!(phi.num_terms(), 9);
    }

    #[test]
    fn lone_vertex_has_two_covers() {
        let q = build_quotient_graph(&parse_graph(r#"{"d":1,"vertices":["u"]}"#).unwrap());
        let covers = cycle_covers(&q).unwrap();
        assert_eq!(covers.len(), 2);
        let ws: Vec<String> = covers.iter().map(|c| c.weight.to_string()).collect();
        assert_eq!(ws, vec!["lambda", "-V_u"]);
    }

    #[test]
    fn chain_system() {
        let g = parse_graph(
            r#"{"d":1,"vertices":["u"],"edges":[{"from":"u","to":"u","shift":[1],"weight":"e"}]}"#,
        )
        .unwrap();
        let phi = dispersion_polynomial(&build_quotient_graph(&g)).unwrap();
        assert_eq!(
            phi,
            LaurentPoly::parse("lambda - V_u + e*(x + x^-1)", 1).unwrap()
        );
        let sys = critical_point_system(&phi).unwrap();
        assert_eq!(sys.equations.len(), 2);
        assert_eq!(
            sys.equations[1],
            LaurentPoly::parse("e*(x - x^-1)", 1).unwrap()
        );
    }

    #[test]
    fn hexagonal_floquet_matrix() {
        let g = parse_graph(HEX).unwrap();
        let params: Params = [("a", 1), ("b", 1), ("c", 1), ("V_u", 0), ("V_v", 0)]
            .into_iter()
            .map(|(k, v)| {
                (
                    k.to_string(),
                    num_rational::BigRational::from_integer(v.into()),
                )
            })
            .collect();
        let one = Complex64::new(1.0, 0.0);
        let h = floquet_matrix_numeric(&g, &params, &[one, one]).unwrap();
        assert!((h[(0, 1)] - Complex64::new(-3.0, 0.0)).norm() < 1e-12);
        assert!((h[(1, 0)] - Complex64::new(-3.0, 0.0)).norm() < 1e-12);
        assert!(h[(0, 0)].norm() < 1e-12);
        let zero = Complex64::new(0.0, 0.0);
        assert_eq!(
            floquet_matrix_numeric(&g, &params, &[one, zero]),
            Err(Error::ZeroCoordinate(1))
        );
    }
}
