//! Isolated common zeros of two Laurent polynomials in `(s, λ)` on the
//! torus `(C^×)^2`: eliminate `λ` by a resultant, find the distinct roots in
//! `s`, then back-substitute and pair.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use super::resultant::{resultant, LambdaPoly};
use super::roots::{distinct_roots, roots_complex};
use super::unipoly::UniPoly;
use crate::error::{Error, Result};
use crate::laurent::RatLaurent;

/// Candidates pair when the other equation vanishes to this relative size.
const PAIR_TOL: f64 = 1e-6;
/// Points closer than this (relative) are the same point.
const MERGE_TOL: f64 = 1e-6;
/// A reported solution must satisfy both equations to this relative size.
pub const RESIDUAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct BivariateSolution {
    /// Distinct torus solutions `(s, λ)`.
    pub points: Vec<[Complex64; 2]>,
    /// `Res_λ` with the powers of `s` divided out.
    pub resultant: UniPoly,
    /// Largest relative residual over the reported points.
    pub max_residual: f64,
}

/// Clears negative exponents and returns the polynomial as a polynomial in
/// `λ` over `Q[s]`. Expects two variables. Positive powers of `λ` are kept,
/// since `λ = 0` may be a genuine solution.
pub fn to_lambda_poly(f: &RatLaurent) -> LambdaPoly {
    let min_s = f.terms.keys().map(|e| e[0]).min().unwrap_or(0);
    let min_l = f.terms.keys().map(|e| e[1]).min().unwrap_or(0).min(0);
    let deg_l = f.terms.keys().map(|e| e[1] - min_l).max().unwrap_or(-1);
    let mut cols: Vec<Vec<BigRational>> = vec![Vec::new(); (deg_l + 1).max(0) as usize];
    for (e, c) in &f.terms {
        let (i, j) = ((e[0] - min_s) as usize, (e[1] - min_l) as usize);
        let col = &mut cols[j];
        if col.len() <= i {
            col.resize(i + 1, BigRational::zero());
        }
        col[i] = c.clone();
    }
    LambdaPoly::new(cols.into_iter().map(UniPoly::new).collect())
}

fn complex_coeffs(p: &LambdaPoly, s: Complex64) -> Vec<Complex64> {
    p.coeffs().iter().map(|c| c.eval_complex(s)).collect()
}

fn relative(f: &RatLaurent, p: &[Complex64]) -> f64 {
    let v = f.evaluate(p).map(|z| z.norm()).unwrap_or(f64::INFINITY);
    let m = f.magnitude(p);
    if m == 0.0 {
        v
    } else {
        v / m
    }
}

fn close(a: &[Complex64; 2], b: &[Complex64; 2]) -> bool {
    a.iter()
        .zip(b)
        .all(|(x, y)| (x - y).norm() <= MERGE_TOL * x.norm().max(1.0))
}

/// Solves `f = g = 0` on `(C^×)^2`, where both have exponents `(s, λ)`.
///
/// Fails with `Degenerate` when the common zero set is not finite (the
/// resultant vanishes identically) or a root cannot be verified.
pub fn solve_bivariate(f: &RatLaurent, g: &RatLaurent) -> Result<BivariateSolution> {
    common_zeros(f, g, true)
}

/// As [`solve_bivariate`], on `C^× × C` unless `lambda_on_torus`.
pub(crate) fn common_zeros(
    f: &RatLaurent,
    g: &RatLaurent,
    lambda_on_torus: bool,
) -> Result<BivariateSolution> {
    for p in [f, g] {
        if p.d != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: p.d,
            });
        }
        if p.is_zero() {
            return Err(Error::Degenerate("an equation is identically zero".into()));
        }
    }
    let (fp, gp) = (to_lambda_poly(f), to_lambda_poly(g));
    let res = resultant(&fp, &gp);
    if res.is_zero() {
        return Err(Error::Degenerate(
            "the equations share a common factor".into(),
        ));
    }
    let res = res.strip_zero_roots();
    // Both free of λ: a common root in s would give a whole line.
    if fp.degree() == Some(0) && gp.degree() == Some(0) {
        let common = fp.lead().gcd(&gp.lead()).strip_zero_roots();
        if common.degree().unwrap_or(0) > 0 {
            return Err(Error::Degenerate(
                "the equations share a common factor".into(),
            ));
        }
        return Ok(BivariateSolution {
            points: Vec::new(),
            resultant: res,
            max_residual: 0.0,
        });
    }
    let mut points: Vec<[Complex64; 2]> = Vec::new();
    for s in distinct_roots(&res) {
        if s.norm() == 0.0 {
            continue;
        }
        let fc = complex_coeffs(&fp, s);
        let gc = complex_coeffs(&gp, s);
        let vanishes = |c: &[Complex64]| c.iter().all(|x| x.norm() <= 1e-12);
        // Take λ from whichever equation is nontrivial on this fibre and of
        // higher degree; test it against the other.
        let (coeffs, check_with) = match (vanishes(&fc), vanishes(&gc)) {
            (true, true) => {
                return Err(Error::Degenerate(format!(
                    "the equations vanish on the whole fibre s = {s}"
                )))
            }
            (true, false) => (gc, f),
            (false, true) => (fc, g),
            _ if fp.degree() >= gp.degree() => (fc, g),
            _ => (gc, f),
        };
        for l in roots_complex(&coeffs) {
            if lambda_on_torus && l.norm() <= 1e-12 {
                continue;
            }
            let p = [s, l];
            if relative(check_with, &p) > PAIR_TOL {
                continue;
            }
            if !points.iter().any(|q| close(q, &p)) {
                points.push(p);
            }
        }
    }
    let mut max_residual: f64 = 0.0;
    for p in &points {
        let r = relative(f, p).max(relative(g, p));
        if r > RESIDUAL_TOL {
            return Err(Error::Degenerate(format!(
                "solution ({}, {}) has residual {r:e}",
                p[0], p[1]
            )));
        }
        max_residual = max_residual.max(r);
    }
    Ok(BivariateSolution {
        points,
        resultant: res,
        max_residual,
    })
}
