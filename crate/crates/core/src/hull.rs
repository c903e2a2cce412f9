//! Exact double-description method for small pointed cones.
//!
//! Given rows `a_1, …, a_m` spanning `R^n`, [`extreme_rays`] returns the
//! extreme rays of `{y : a_i·y ≥ 0}` together with the rows tight at each
//! ray. Homogenizing points as `(p, 1)` turns this into a facet enumerator
//! for lattice polytopes; adding recession rows `(g, 0)` handles polyhedra.
//! Everything is integral: rays are kept primitive and built from integer
//! combinations, so no rational arithmetic is needed.

use std::collections::BTreeSet;

use num_integer::Integer;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ray {
    pub v: Vec<i128>,
    /// Indices of the rows with `a_i·v = 0`.
    pub tight: BTreeSet<usize>,
}

fn dot(a: &[i128], b: &[i128]) -> i128 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn primitive(v: Vec<i128>) -> Vec<i128> {
    let g = v.iter().fold(0i128, |g, &x| g.gcd(&x));
    if g <= 1 {
        return v;
    }
    v.into_iter().map(|x| x / g).collect()
}

pub(crate) fn det_i128(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a = m.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Indices of a maximal linearly independent subset of `rows`, greedily.
pub(crate) fn independent_rows(rows: &[Vec<i128>]) -> Vec<usize> {
    let n = rows.first().map_or(0, Vec::len);
    // fraction-free echelon basis kept alongside the chosen indices
    let mut basis: Vec<Vec<i128>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    let mut chosen = Vec::new();
    for (idx, r) in rows.iter().enumerate() {
        let mut v = r.clone();
        for (b, &p) in basis.iter().zip(&pivots) {
            if v[p] != 0 {
                let (x, y) = (b[p], v[p]);
                for k in 0..n {
                    v[k] = v[k] * x - b[k] * y;
                }
                v = primitive(v);
            }
        }
        if let Some(p) = v.iter().position(|&x| x != 0) {
            basis.push(v);
            pivots.push(p);
            chosen.push(idx);
            if chosen.len() == n {
                break;
            }
        }
    }
    chosen
}

/// Extreme rays of the cone `{y : rows[i]·y ≥ 0}`. Returns `None` when the
/// rows do not span `R^n` (the cone is then not pointed).
pub fn extreme_rays(rows: &[Vec<i128>]) -> Option<Vec<Ray>> {
    let n = rows.first()?.len();
    let basis = independent_rows(rows);
    if basis.len() < n {
        return None;
    }
    let a0: Vec<Vec<i128>> = basis.iter().map(|&i| rows[i].clone()).collect();
    let det = det_i128(&a0);
    debug_assert!(det != 0);
    let s = det.signum();

    // column j of adj(A0): cofactors C_{j,i}
    let mut rays: Vec<Vec<i128>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut col = vec![0i128; n];
        for (i, c) in col.iter_mut().enumerate() {
            let minor: Vec<Vec<i128>> = (0..n)
                .filter(|&r| r != j)
                .map(|r| (0..n).filter(|&k| k != i).map(|k| a0[r][k]).collect())
                .collect();
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            *c = s * sign * det_i128(&minor);
        }
        rays.push(primitive(col));
    }

    let mut processed: Vec<usize> = basis.clone();
    let mut current: Vec<Ray> = rays
        .into_iter()
        .map(|v| {
            let tight = processed
                .iter()
                .copied()
                .filter(|&i| dot(&rows[i], &v) == 0)
                .collect();
            Ray { v, tight }
        })
        .collect();

    let in_basis: BTreeSet<usize> = basis.iter().copied().collect();
    for (idx, a) in rows.iter().enumerate() {
        if in_basis.contains(&idx) {
            continue;
        }
        let vals: Vec<i128> = current.iter().map(|r| dot(a, &r.v)).collect();
        let mut next: Vec<Ray> = Vec::new();
        for (r, &val) in current.iter().zip(&vals) {
            if val >= 0 {
                let mut r = r.clone();
                if val == 0 {
                    r.tight.insert(idx);
                }
                next.push(r);
            }
        }
        for (pi, p) in current.iter().enumerate() {
            if vals[pi] <= 0 {
                continue;
            }
            for (ni, q) in current.iter().enumerate() {
                if vals[ni] >= 0 {
                    continue;
                }
                let common: BTreeSet<usize> = p.tight.intersection(&q.tight).copied().collect();
                if common.len() + 2 < n {
                    continue;
                }
                let adjacent = current
                    .iter()
                    .enumerate()
                    .all(|(k, r)| k == pi || k == ni || !common.is_subset(&r.tight));
                if !adjacent {
                    continue;
                }
                let v: Vec<i128> =
                    p.v.iter()
                        .zip(&q.v)
                        .map(|(x, y)| vals[pi] * y - vals[ni] * x)
                        .collect();
                let v = primitive(v);
                let mut tight = common;
                tight.insert(idx);
                next.push(Ray { v, tight });
            }
        }
        current = next;
        processed.push(idx);
    }
    // final tight sets against all rows, deduplicated
    let mut out: Vec<Ray> = Vec::new();
    for r in current {
        if out.iter().any(|o| o.v == r.v) {
            continue;
        }
        let tight = (0..rows.len())
            .filter(|&i| dot(&rows[i], &r.v) == 0)
            .collect();
        out.push(Ray { v: r.v, tight });
    }
    out.sort_by(|a, b| a.v.cmp(&b.v));
    Some(out)
}

/// A facet `η·x ≥ b`: `(η primitive, b, indices of points on the facet)`.
pub type HullFacet = (Vec<i64>, i64, BTreeSet<usize>);

/// Facets of the convex hull of full-dimensional points in `Z^k`.
pub fn polytope_facets(points: &[Vec<i64>]) -> Option<Vec<HullFacet>> {
    let rows: Vec<Vec<i128>> = points
        .iter()
        .map(|p| p.iter().map(|&x| i128::from(x)).chain([1]).collect())
        .collect();
    let k = points.first()?.len();
    if k == 0 {
        return None;
    }
    let rays = extreme_rays(&rows)?;
    Some(
        rays.into_iter()
            .map(|r| {
                let eta = &r.v[..k];
                let g = eta.iter().fold(0i128, |g, &x| g.gcd(&x));
                let eta: Vec<i64> = eta.iter().map(|&x| i64::try_from(x / g).unwrap()).collect();
                let b = i64::try_from(-r.v[k] / g).unwrap();
                (eta, b, r.tight)
            })
            .collect(),
    )
}
