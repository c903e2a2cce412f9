//! Complex roots of univariate polynomials: companion-matrix eigenvalues,
//! then a few Newton steps against the original coefficients. When the
//! eigenvalue iteration stalls (clustered roots), Aberth–Ehrlich takes over.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use super::unipoly::{eval_complex, UniPoly};

fn derivative(c: &[f64]) -> Vec<f64> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(k, x)| k as f64 * x)
        .collect()
}

/// All roots with multiplicity of a polynomial given by `f64` coefficients
/// (ascending). The zero polynomial and constants have no roots.
pub fn roots_f64(c: &[f64]) -> Vec<Complex64> {
    let mut c = c.to_vec();
    while c.last().is_some_and(|x| *x == 0.0) {
        c.pop();
    }
    if c.len() <= 1 {
        return Vec::new();
    }
    let n = c.len() - 1;
    let lead = c[n];
    let mut comp = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        comp[(i, n - 1)] = -c[i] / lead;
    }
    let dc = derivative(&c);
    let cc: Vec<Complex64> = c.iter().map(|&x| x.into()).collect();
    let start: Vec<Complex64> = match Schur::try_new(comp, f64::EPSILON, 200 * n) {
        Some(schur) => schur.complex_eigenvalues().iter().copied().collect(),
        None => aberth(&cc),
    };
    start.into_iter().map(|z| polish(&c, &dc, z)).collect()
}

fn eval_cc(c: &[Complex64], x: Complex64) -> Complex64 {
    c.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &k| acc * x + k)
}

/// Roots of a polynomial with complex coefficients (ascending). Trailing
/// coefficients below `1e-14` of the largest are treated as zero.
pub fn roots_complex(c: &[Complex64]) -> Vec<Complex64> {
    let mut c = c.to_vec();
    let scale = c.iter().map(|x| x.norm()).fold(0.0, f64::max);
    while c.last().is_some_and(|x| x.norm() <= 1e-14 * scale) {
        c.pop();
    }
    if c.len() <= 1 {
        return Vec::new();
    }
    if c.iter().all(|x| x.im == 0.0) {
        return roots_f64(&c.iter().map(|x| x.re).collect::<Vec<_>>());
    }
    let n = c.len() - 1;
    let lead = c[n];
    let mut comp = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        comp[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        comp[(i, n - 1)] = -c[i] / lead;
    }
    let dc: Vec<Complex64> = c
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, x)| x * k as f64)
        .collect();
    let start: Vec<Complex64> = match Schur::try_new(comp, f64::EPSILON, 200 * n) {
        Some(schur) => schur.eigenvalues().map(|e| e.iter().copied().collect()),
        None => None,
    }
    .unwrap_or_else(|| aberth(&c));
    start
        .into_iter()
        .map(|mut z| {
            for _ in 0..8 {
                let f = eval_cc(&c, z);
                let df = eval_cc(&dc, z);
                if df.norm() == 0.0 {
                    break;
                }
                let next = z - f / df;
                if !next.re.is_finite() || eval_cc(&c, next).norm() > f.norm() {
                    break;
                }
                z = next;
            }
            z
        })
        .collect()
}

/// Simultaneous iteration for all roots, started on a circle of the Cauchy
/// radius.
fn aberth(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let dc: Vec<Complex64> = c
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, x)| x * k as f64)
        .collect();
    let lead = c[n].norm();
    let radius = 1.0 + c[..n].iter().map(|x| x.norm() / lead).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 0.4 + std::f64::consts::TAU * k as f64 / n as f64))
        .collect();
    for _ in 0..500 {
        let mut moved: f64 = 0.0;
        for i in 0..n {
            let f = eval_cc(c, z[i]);
            let df = eval_cc(&dc, z[i]);
            if f.norm() == 0.0 {
                continue;
            }
            let ratio = f / df;
            let repel: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repel);
            if step.re.is_finite() && step.im.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / z[i].norm().max(1.0));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

fn polish(c: &[f64], dc: &[f64], mut z: Complex64) -> Complex64 {
    for _ in 0..8 {
        let f = eval_complex(c, z);
        let df = eval_complex(dc, z);
        if df.norm() == 0.0 {
            break;
        }
        let step = f / df;
        let next = z - step;
        if !next.re.is_finite() || !next.im.is_finite() {
            break;
        }
        // Only accept steps that do not increase the residual.
        if eval_complex(c, next).norm() > f.norm() {
            break;
        }
        z = next;
        if step.norm() <= 1e-15 * z.norm().max(1.0) {
            break;
        }
    }
    z
}

pub fn roots(p: &UniPoly) -> Vec<Complex64> {
    roots_f64(&p.to_f64())
}

/// Roots of a squarefree polynomial, which are distinct by construction.
pub fn distinct_roots(p: &UniPoly) -> Vec<Complex64> {
    roots(&p.squarefree_part())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic() {
        let mut r = roots(&UniPoly::from_ints(&[-6, 11, -6, 1]));
        r.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        for (z, want) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert!((z - want).norm() < 1e-10, "{z}");
        }
    }

    #[test]
    fn complex_pair() {
        let r = roots(&UniPoly::from_ints(&[1, 0, 1]));
        assert_eq!(r.len(), 2);
        for z in r {
            assert!((z.norm() - 1.0).abs() < 1e-12 && z.re.abs() < 1e-12);
        }
    }

    #[test]
    fn squarefree_roots_are_distinct() {
        let p = UniPoly::from_ints(&[-1, 0, 1]).pow(3);
        assert_eq!(roots(&p).len(), 6);
        assert_eq!(distinct_roots(&p).len(), 2);
    }
}
