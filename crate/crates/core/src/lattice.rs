//! Integer linear algebra on row-vector lattices.
//!
//! Lattice points are row vectors; a sublattice is described by a list of
//! generating rows. The Smith normal form `U G V = D` of the generator
//! matrix gives everything needed downstream: the rank, the index of the
//! generated lattice in its saturation, a basis of the saturation (the first
//! `rank` rows of `V^-1`), a complementary basis, and the projection onto
//! the quotient `Z^n / Sat` (the trailing coordinates of `p V`).

use num_integer::Integer;

pub type IntVec = Vec<i64>;
pub type IntMat = Vec<Vec<i64>>;

pub fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Divides out the content; the zero vector is returned unchanged.
pub fn primitive(v: &[i64]) -> IntVec {
    let g = gcd_all(v);
    if g == 0 {
        return v.to_vec();
    }
    v.iter().map(|x| x / g).collect()
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn sub(a: &[i64], b: &[i64]) -> IntVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[i64], b: &[i64]) -> IntVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[i64], k: i64) -> IntVec {
    a.iter().map(|x| x * k).collect()
}

/// Row vector times matrix.
pub fn vec_mat(p: &[i64], m: &IntMat) -> IntVec {
    let ncols = m.first().map_or(0, Vec::len);
    (0..ncols)
        .map(|j| p.iter().zip(m).map(|(x, row)| x * row[j]).sum())
        .collect()
}

pub fn mat_mul(a: &IntMat, b: &IntMat) -> IntMat {
    a.iter().map(|row| vec_mat(row, b)).collect()
}

pub fn identity(n: usize) -> IntMat {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn det(m: &IntMat) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| i128::from(x)).collect())
        .collect();
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
    i64::try_from(sign * a[n - 1][n - 1]).expect("determinant overflow")
}

/// Rank of a list of integer row vectors.
pub fn rank(rows: &[IntVec]) -> usize {
    let Some(n) = rows.first().map(Vec::len) else {
        return 0;
    };
    Smith::new(rows, n).rank
}

/// Dimension of the affine span of a point set (`-1` encoded as `None` for
/// the empty set).
pub fn affine_dim(points: &[IntVec]) -> Option<usize> {
    let first = points.first()?;
    let diffs: Vec<IntVec> = points[1..].iter().map(|p| sub(p, first)).collect();
    Some(rank(&diffs))
}

/// Smith normal form data: only the column transform is kept.
#[derive(Debug, Clone)]
pub struct Smith {
    pub ambient: usize,
    pub rank: usize,
    /// Nonzero invariant factors `d_1 | d_2 | ... | d_rank`, all positive.
    pub diag: Vec<i64>,
    /// Unimodular `n x n` column transform `V`.
    pub v: IntMat,
    /// Its inverse.
    pub v_inv: IntMat,
}

impl Smith {
    /// Computes the Smith form of the `m x n` matrix whose rows are `gens`.
    pub fn new(gens: &[IntVec], n: usize) -> Self {
        let mut a: Vec<Vec<i64>> = gens.to_vec();
        let m = a.len();
        let mut v = identity(n);
        let mut v_inv = identity(n);

        let swap_cols =
            |a: &mut Vec<Vec<i64>>, v: &mut IntMat, v_inv: &mut IntMat, i: usize, j: usize| {
                if i == j {
                    return;
                }
                for row in a.iter_mut() {
                    row.swap(i, j);
                }
                for row in v.iter_mut() {
                    row.swap(i, j);
                }
                v_inv.swap(i, j);
            };
        // col_j -= q * col_i
        let col_op = |a: &mut Vec<Vec<i64>>,
                      v: &mut IntMat,
                      v_inv: &mut IntMat,
                      i: usize,
                      j: usize,
                      q: i64| {
            if q == 0 {
                return;
            }
            for row in a.iter_mut() {
                row[j] -= q * row[i];
            }
            for row in v.iter_mut() {
                row[j] -= q * row[i];
            }
            let rj = v_inv[j].clone();
            for (x, y) in v_inv[i].iter_mut().zip(rj) {
                *x += q * y;
            }
        };

        let mut diag = Vec::new();
        let mut t = 0;
        while t < m.min(n) {
            // pivot: smallest nonzero magnitude in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(t) {
                for (j, &x) in row.iter().enumerate().skip(t) {
                    if x != 0 && best.is_none_or(|(bi, bj)| x.abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            a.swap(t, pi);
            swap_cols(&mut a, &mut v, &mut v_inv, t, pj);

            loop {
                let mut clean = true;
                for i in t + 1..m {
                    let q = Integer::div_floor(&a[i][t], &a[t][t]);
                    if q != 0 {
                        let rt = a[t].clone();
                        for (x, y) in a[i].iter_mut().zip(rt) {
                            *x -= q * y;
                        }
                    }
                    if a[i][t] != 0 {
                        clean = false;
                    }
                }
                for j in t + 1..n {
                    let q = Integer::div_floor(&a[t][j], &a[t][t]);
                    col_op(&mut a, &mut v, &mut v_inv, t, j, q);
                    if a[t][j] != 0 {
                        clean = false;
                    }
                }
                if clean {
                    // divisibility of the trailing block
                    let p = a[t][t];
                    let bad = (t + 1..m).find(|&i| a[i][t + 1..].iter().any(|x| x % p != 0));
                    match bad {
                        None => break,
                        Some(i) => {
                            let ri = a[i].clone();
                            for (x, y) in a[t].iter_mut().zip(ri) {
                                *x += y;
                            }
                            continue;
                        }
                    }
                }
                // move the smallest remaining entry of row/column t to the pivot
                let mut best = (t, t);
                for i in t..m {
                    if a[i][t] != 0 && a[i][t].abs() < a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t..n {
                    if a[t][j] != 0 && a[t][j].abs() < a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                a.swap(t, best.0);
                swap_cols(&mut a, &mut v, &mut v_inv, t, best.1);
            }
            if a[t][t] < 0 {
                for x in a[t].iter_mut() {
                    *x = -*x;
                }
            }
            diag.push(a[t][t]);
            t += 1;
        }

        Self {
            ambient: n,
            rank: diag.len(),
            diag,
            v,
            v_inv,
        }
    }
}

/// A sublattice of `Z^n` given by generators, with its saturation.
#[derive(Debug, Clone)]
pub struct Sublattice {
    smith: Smith,
}

impl Sublattice {
    pub fn generated_by(gens: &[IntVec], n: usize) -> Self {
        Self {
            smith: Smith::new(gens, n),
        }
    }

    pub fn ambient(&self) -> usize {
        self.smith.ambient
    }

    pub fn rank(&self) -> usize {
        self.smith.rank
    }

    /// `[Sat(L) : L]`.
    pub fn index_in_saturation(&self) -> u64 {
        self.smith.diag.iter().map(|&d| d as u64).product()
    }

    /// A basis of the lattice itself.
    pub fn basis(&self) -> IntMat {
        (0..self.rank())
            .map(|k| scale(&self.smith.v_inv[k], self.smith.diag[k]))
            .collect()
    }

    /// A basis of `R L ∩ Z^n`.
    pub fn saturation_basis(&self) -> IntMat {
        self.smith.v_inv[..self.rank()].to_vec()
    }

    /// Rows completing the saturation basis to a basis of `Z^n`.
    pub fn complement_basis(&self) -> IntMat {
        self.smith.v_inv[self.rank()..].to_vec()
    }

    fn transformed(&self, p: &[i64]) -> IntVec {
        vec_mat(p, &self.smith.v)
    }

    /// Coordinates of `p` in the saturation basis, if `p` lies in the saturation.
    pub fn saturation_coords(&self, p: &[i64]) -> Option<IntVec> {
        let q = self.transformed(p);
        if q[self.rank()..].iter().any(|&x| x != 0) {
            return None;
        }
        Some(q[..self.rank()].to_vec())
    }

    /// Image of `p` in `Z^n / Sat(L) ≅ Z^(n - rank)`.
    pub fn quotient(&self, p: &[i64]) -> IntVec {
        self.transformed(p)[self.rank()..].to_vec()
    }

    /// Coordinates of `p` with respect to [`Sublattice::basis`], if `p ∈ L`.
    pub fn lattice_coords(&self, p: &[i64]) -> Option<IntVec> {
        let c = self.saturation_coords(p)?;
        c.iter()
            .zip(&self.smith.diag)
            .map(|(x, d)| (x % d == 0).then_some(x / d))
            .collect()
    }

    /// Pulls a functional `w` on saturation coordinates back to `Z^n`:
    /// `η·p = w·saturation_coords(p)` for every `p` in the span.
    pub fn lift_functional(&self, w: &[i64]) -> IntVec {
        let r = self.rank();
        assert_eq!(w.len(), r);
        self.smith
            .v
            .iter()
            .map(|row| row[..r].iter().zip(w).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        match self.saturation_coords(p) {
            None => false,
            Some(c) => c.iter().zip(&self.smith.diag).all(|(x, d)| x % d == 0),
        }
    }

    pub fn in_span(&self, p: &[i64]) -> bool {
        self.saturation_coords(p).is_some()
    }
}

/// A unimodular matrix whose first row is the primitive vector `c`.
pub fn extend_to_unimodular(c: &[i64]) -> IntMat {
    let n = c.len();
    let s = Smith::new(&[c.to_vec()], n);
    assert_eq!(s.diag, vec![1], "vector {c:?} is not primitive");
    let mut m = s.v_inv;
    m[0] = c.to_vec();
    m
}

/// Inverse of a unimodular integer matrix (adjugate over the determinant).
pub fn unimodular_inverse(m: &IntMat) -> IntMat {
    let n = m.len();
    let d = det(m);
    assert_eq!(d.abs(), 1, "matrix is not unimodular");
    let minor = |skip_r: usize, skip_c: usize| -> i64 {
        let rows: IntMat = (0..n)
            .filter(|&r| r != skip_r)
            .map(|r| (0..n).filter(|&c| c != skip_c).map(|c| m[r][c]).collect())
            .collect();
        if rows.is_empty() {
            1
        } else {
            det(&rows)
        }
    };
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                    sign * minor(j, i) * d
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_smith(gens: &[IntVec], n: usize) {
        let s = Smith::new(gens, n);
        assert_eq!(mat_mul(&s.v, &s.v_inv), identity(n));
        assert_eq!(det(&s.v).abs(), 1);
        for w in s.diag.windows(2) {
            assert_eq!(w[1] % w[0], 0);
        }
        let l = Sublattice::generated_by(gens, n);
        for g in gens {
            assert!(l.contains(g), "{g:?} not in lattice");
        }
    }

    #[test]
    fn smith_examples() {
        check_smith(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], 3);
        check_smith(&[vec![1, 0, -2], vec![0, 1, -1]], 3);
        check_smith(&[vec![0, 0, 0]], 3);
        check_smith(&[vec![4, 6], vec![6, 9]], 2);
        let s = Smith::new(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], 3);
        assert_eq!(s.diag, vec![2, 6, 12]);
    }

    #[test]
    fn index_and_saturation() {
        // 2Z x Z inside Z^2
        let l = Sublattice::generated_by(&[vec![2, 0], vec![0, 1]], 2);
        assert_eq!(l.index_in_saturation(), 2);
        assert_eq!(l.rank(), 2);
        assert!(!l.contains(&[1, 0]));
        assert!(l.in_span(&[1, 0]));
        // a single vertex: zero lattice
        let z = Sublattice::generated_by(&[], 3);
        assert_eq!(z.rank(), 0);
        assert_eq!(z.index_in_saturation(), 1);
        assert_eq!(z.quotient(&[1, 2, 3]).len(), 3);
    }

    #[test]
    fn quotient_kills_the_span() {
        let l = Sublattice::generated_by(&[vec![1, 0, -2], vec![0, 1, -1]], 3);
        assert_eq!(l.quotient(&[1, 0, -2]), vec![0]);
        assert_eq!(l.quotient(&[3, -2, -4]), vec![0]);
        assert_eq!(
            l.quotient(&[0, 0, 1]).iter().map(|x| x.abs()).sum::<i64>(),
            1
        );
    }

    #[test]
    fn determinant_and_extension() {
        assert_eq!(det(&vec![vec![2, 1], vec![1, 3]]), 5);
        assert_eq!(det(&vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]), -1);
        let m = extend_to_unimodular(&[0, 0, 1]);
        assert_eq!(m[0], vec![0, 0, 1]);
        assert_eq!(det(&m).abs(), 1);
        let m = extend_to_unimodular(&[2, 3, 5]);
        assert_eq!(det(&m).abs(), 1);
        assert_eq!(mat_mul(&m, &unimodular_inverse(&m)), identity(3));
        assert_eq!(unimodular_inverse(&vec![vec![-1]]), vec![vec![-1]]);
    }

    #[test]
    fn affine_dimension() {
        assert_eq!(affine_dim(&[vec![1, 1]]), Some(0));
        assert_eq!(affine_dim(&[vec![0, 0], vec![2, 4]]), Some(1));
        assert_eq!(affine_dim(&[]), None);
    }
}
