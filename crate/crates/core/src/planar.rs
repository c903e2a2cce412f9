//! Planar lattice polygons: hulls, areas and mixed areas.
//!
//! Areas are returned doubled so that everything stays integral.

use crate::lattice::IntVec;

fn cross(o: &[i64], a: &[i64], b: &[i64]) -> i64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Counter-clockwise hull vertices (monotone chain); collinear points dropped.
pub fn convex_hull(points: &[IntVec]) -> Vec<IntVec> {
    let mut pts: Vec<IntVec> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<IntVec> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<IntVec> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Twice the area of the convex hull.
pub fn double_area(points: &[IntVec]) -> i64 {
    let h = convex_hull(points);
    if h.len() < 3 {
        return 0;
    }
    let mut s = 0;
    for i in 0..h.len() {
        let (a, b) = (&h[i], &h[(i + 1) % h.len()]);
        s += a[0] * b[1] - a[1] * b[0];
    }
    s.abs()
}

pub fn minkowski_sum(p: &[IntVec], q: &[IntVec]) -> Vec<IntVec> {
    let mut out = Vec::with_capacity(p.len() * q.len());
    for a in p {
        for b in q {
            out.push(vec![a[0] + b[0], a[1] + b[1]]);
        }
    }
    convex_hull(&out)
}

/// `MA(P, Q) = area(P + Q) − area(P) − area(Q)`.
pub fn mixed_area(p: &[IntVec], q: &[IntVec]) -> u64 {
    if p.is_empty() || q.is_empty() {
        return 0;
    }
    let twice = double_area(&minkowski_sum(p, q)) - double_area(p) - double_area(q);
    debug_assert!(twice >= 0 && twice % 2 == 0);
    (twice / 2) as u64
}
