//! Lattice polytopes of dimension at most four: facets, the face poset,
//! normalized volumes, face lattices and subdiagram volumes.
//!
//! Conventions: normals are primitive and *exposing*, i.e. a face is the set
//! where its normal is minimized. The last ambient coordinate is the
//! spectral direction `λ`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hull;
use crate::lattice::{self, dot, primitive, sub, IntVec, Sublattice};

pub const DIM_LIMIT: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Facet {
    /// Primitive inward normal.
    pub normal: IntVec,
    /// `min normal·p` over the polytope.
    pub offset: i64,
    /// Indices of the support points on the facet.
    pub points: BTreeSet<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FaceKind {
    Base,
    Vertical,
    Oblique,
    Whole,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Face {
    pub id: usize,
    /// Indices into [`LatticePolytope::points`]; this set identifies the face.
    pub points: Vec<usize>,
    pub dim: usize,
    /// Facets containing the face.
    pub facets: Vec<usize>,
    /// A primitive exposing vector (zero for the whole polytope).
    pub normal: IntVec,
}

impl Face {
    pub fn codim(&self, ambient: usize) -> usize {
        ambient - self.dim
    }
}

#[derive(Debug, Clone)]
pub struct LatticePolytope {
    ambient: usize,
    points: Vec<IntVec>,
    dim: usize,
    vertices: Vec<usize>,
    facets: Vec<Facet>,
    /// The difference lattice `Z𝒜` (affine, based at `points[0]`).
    affine: Sublattice,
    /// Points in coordinates of a basis of `Z𝒜`, relative to `points[0]`.
    za_coords: Vec<IntVec>,
}

impl LatticePolytope {
    /// Convex hull of a finite point set (duplicates removed, sorted).
    pub fn new(points: &[IntVec]) -> Result<Self> {
        let mut pts: Vec<IntVec> = points.to_vec();
        pts.sort();
        pts.dedup();
        let Some(p0) = pts.first().cloned() else {
            return Err(Error::Degenerate("empty point set".into()));
        };
        let ambient = p0.len();
        if pts.iter().any(|p| p.len() != ambient) {
            return Err(Error::Invariant("points of mixed length".into()));
        }
        let diffs: Vec<IntVec> = pts.iter().map(|p| sub(p, &p0)).collect();
        let affine = Sublattice::generated_by(&diffs, ambient);
        let dim = affine.rank();
        if dim > DIM_LIMIT {
            return Err(Error::SizeGuard {
                what: "polytope dimension",
                got: dim,
                limit: DIM_LIMIT,
            });
        }
        let za_coords = diffs
            .iter()
            .map(|d| {
                affine
                    .lattice_coords(d)
                    .expect("difference lies in its lattice")
            })
            .collect();

        let mut facets = Vec::new();
        if dim > 0 {
            let local: Vec<IntVec> = diffs
                .iter()
                .map(|d| affine.saturation_coords(d).expect("in span"))
                .collect();
            let raw = hull::polytope_facets(&local)
                .ok_or_else(|| Error::Invariant("hull of a full-dimensional set failed".into()))?;
            for (w, _, on) in raw {
                let normal = primitive(&affine.lift_functional(&w));
                let offset = pts.iter().map(|p| dot(&normal, p)).min().unwrap();
                let points: BTreeSet<usize> = (0..pts.len())
                    .filter(|&i| dot(&normal, &pts[i]) == offset)
                    .collect();
                debug_assert_eq!(points, on);
                facets.push(Facet {
                    normal,
                    offset,
                    points,
                });
            }
            facets.sort_by(|a, b| a.points.cmp(&b.points));
        }

        let vertices = if dim == 0 {
            vec![0]
        } else {
            (0..pts.len())
                .filter(|&i| {
                    let mut inter: Option<BTreeSet<usize>> = None;
                    for f in facets.iter().filter(|f| f.points.contains(&i)) {
                        inter = Some(match inter {
                            None => f.points.clone(),
                            Some(s) => s.intersection(&f.points).copied().collect(),
                        });
                    }
                    inter.is_some_and(|s| s.len() == 1)
                })
                .collect()
        };

        Ok(Self {
            ambient,
            points: pts,
            dim,
            vertices,
            facets,
            affine,
            za_coords,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.ambient
    }

    pub fn points(&self) -> &[IntVec] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &IntVec {
        &self.points[i]
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn vertex_points(&self) -> Vec<IntVec> {
        self.vertices
            .iter()
            .map(|&i| self.points[i].clone())
            .collect()
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn index_of(&self, p: &[i64]) -> Option<usize> {
        self.points.binary_search_by(|q| q.as_slice().cmp(p)).ok()
    }

    /// Normalized volume in the saturated lattice of the affine span.
    pub fn nvol(&self) -> u64 {
        normalized_volume(&self.points)
    }

    /// `[Z^{d+1} : Z𝒜]`, or `None` if the polytope is not full-dimensional.
    pub fn lattice_index(&self) -> Option<u64> {
        self.is_full_dimensional()
            .then(|| self.affine.index_in_saturation())
    }

    /// Support points minimizing `eta`.
    pub fn argmin(&self, eta: &[i64]) -> Vec<usize> {
        let m = self.points.iter().map(|p| dot(eta, p)).min().unwrap();
        (0..self.points.len())
            .filter(|&i| dot(eta, &self.points[i]) == m)
            .collect()
    }

    /// All nonempty faces, the polytope itself last. Within a dimension,
    /// faces are ordered by their point sets.
    pub fn face_lattice(&self) -> Vec<Face> {
        let mut sets: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut frontier: Vec<BTreeSet<usize>> =
            self.facets.iter().map(|f| f.points.clone()).collect();
        while let Some(s) = frontier.pop() {
            let key: Vec<usize> = s.iter().copied().collect();
            if !sets.insert(key) {
                continue;
            }
            for f in &self.facets {
                let t: BTreeSet<usize> = s.intersection(&f.points).copied().collect();
                if !t.is_empty() && t.len() < s.len() {
                    frontier.push(t);
                }
            }
        }
        let whole: Vec<usize> = (0..self.points.len()).collect();
        sets.remove(&whole);

        let mut faces: Vec<(usize, Vec<usize>)> = sets
            .into_iter()
            .map(|s| {
                let pts: Vec<IntVec> = s.iter().map(|&i| self.points[i].clone()).collect();
                (lattice::affine_dim(&pts).unwrap(), s)
            })
            .collect();
        faces.sort();
        faces.push((self.dim, whole));

        faces
            .into_iter()
            .enumerate()
            .map(|(id, (dim, pts))| {
                let set: BTreeSet<usize> = pts.iter().copied().collect();
                let containing: Vec<usize> = if dim == self.dim {
                    Vec::new()
                } else {
                    (0..self.facets.len())
                        .filter(|&k| set.is_subset(&self.facets[k].points))
                        .collect()
                };
                let mut normal = vec![0; self.ambient];
                for &k in &containing {
                    normal = lattice::add(&normal, &self.facets[k].normal);
                }
                Face {
                    id,
                    points: pts,
                    dim,
                    facets: containing,
                    normal: primitive(&normal),
                }
            })
            .collect()
    }

    /// Base / vertical / oblique / whole, with `λ` the last coordinate.
    pub fn classify(&self, face: &Face) -> FaceKind {
        if face.dim == self.dim && face.points.len() == self.points.len() {
            return FaceKind::Whole;
        }
        let mut e = vec![0; self.ambient];
        e[self.ambient - 1] = 1;
        if self.argmin(&e) == face.points {
            return FaceKind::Base;
        }
        if self.face_sublattice(face).in_span(&e) {
            FaceKind::Vertical
        } else {
            FaceKind::Oblique
        }
    }

    pub fn face_points(&self, face: &Face) -> Vec<IntVec> {
        face.points
            .iter()
            .map(|&i| self.points[i].clone())
            .collect()
    }

    /// `Zℱ` as a sublattice of `Z^{d+1}`.
    pub fn face_sublattice(&self, face: &Face) -> Sublattice {
        let b = &self.points[face.points[0]];
        let diffs: Vec<IntVec> = face
            .points
            .iter()
            .map(|&i| sub(&self.points[i], b))
            .collect();
        Sublattice::generated_by(&diffs, self.ambient)
    }

    pub fn face_nvol(&self, face: &Face) -> u64 {
        normalized_volume(&self.face_points(face))
    }

    /// Lattice length of an edge.
    pub fn lattice_length(&self, face: &Face) -> Result<u64> {
        if face.dim != 1 {
            return Err(Error::Invariant(format!(
                "lattice length needs a 1-dimensional face, got dimension {}",
                face.dim
            )));
        }
        Ok(self.face_nvol(face))
    }

    /// `Zℱ` inside `Z𝒜`, in `Z𝒜` coordinates.
    fn face_sublattice_za(&self, face: &Face) -> Sublattice {
        let b = &self.za_coords[face.points[0]];
        let diffs: Vec<IntVec> = face
            .points
            .iter()
            .map(|&i| sub(&self.za_coords[i], b))
            .collect();
        Sublattice::generated_by(&diffs, self.dim)
    }

    pub fn lattice_data(&self, face: &Face) -> FaceLatticeData {
        let zf = self.face_sublattice(face);
        let za = self.face_sublattice_za(face);
        let mut gens = BTreeSet::new();
        for a in &self.points {
            for &j in &face.points {
                let g = sub(a, &self.points[j]);
                if g.iter().any(|&x| x != 0) {
                    gens.insert(g);
                }
            }
        }
        FaceLatticeData {
            zf_basis: zf.basis(),
            sat_basis: zf.saturation_basis(),
            index: za.index_in_saturation(),
            monoid_generators: gens.into_iter().collect(),
        }
    }

    /// The image monoid generators `τ_ℱ ⊂ Z^{codim}`: nonzero images of
    /// `𝒜 − b` in `Z𝒜 / Sat(ℱ)`.
    pub fn tau_generators(&self, face: &Face) -> Vec<IntVec> {
        let sat = self.face_sublattice_za(face);
        let b = &self.za_coords[face.points[0]];
        let mut out = BTreeSet::new();
        for c in &self.za_coords {
            let q = sat.quotient(&sub(c, b));
            if q.iter().any(|&x| x != 0) {
                out.insert(q);
            }
        }
        out.into_iter().collect()
    }

    /// The subdiagram volume `μ_ℱ`.
    pub fn subdiagram_volume(&self, face: &Face) -> Result<u64> {
        subdiagram_volume(&self.tau_generators(face), self.dim - face.dim)
    }

    /// OFF rendering (3-dimensional polytopes in `Z^3` only).
    pub fn to_off(&self) -> Result<String> {
        if self.ambient != 3 || self.dim != 3 {
            return Err(Error::Unsupported(
                "OFF output needs a full-dimensional polytope in Z^3".into(),
            ));
        }
        let vidx: BTreeMap<usize, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(k, &i)| (i, k))
            .collect();
        let mut s = format!("OFF\n{} {} 0\n", self.vertices.len(), self.facets.len());
        for &i in &self.vertices {
            let p = &self.points[i];
            s.push_str(&format!("{} {} {}\n", p[0], p[1], p[2]));
        }
        for f in &self.facets {
            let vs: Vec<usize> = f
                .points
                .iter()
                .copied()
                .filter(|i| vidx.contains_key(i))
                .collect();
            let ordered = order_around(&vs, &self.points, &f.normal);
            let ids: Vec<String> = ordered.iter().map(|i| vidx[i].to_string()).collect();
            s.push_str(&format!("{} {}\n", ids.len(), ids.join(" ")));
        }
        Ok(s)
    }
}

/// Orders coplanar points counter-clockwise as seen from the outside.
fn order_around(idx: &[usize], pts: &[IntVec], inward: &[i64]) -> Vec<usize> {
    let n = idx.len() as f64;
    let c: Vec<f64> = (0..3)
        .map(|k| idx.iter().map(|&i| pts[i][k] as f64).sum::<f64>() / n)
        .collect();
    let nrm: Vec<f64> = inward.iter().map(|&x| -(x as f64)).collect();
    let p0 = &pts[idx[0]];
    let u: Vec<f64> = (0..3).map(|k| p0[k] as f64 - c[k]).collect();
    let v = [
        nrm[1] * u[2] - nrm[2] * u[1],
        nrm[2] * u[0] - nrm[0] * u[2],
        nrm[0] * u[1] - nrm[1] * u[0],
    ];
    let mut keyed: Vec<(f64, usize)> = idx
        .iter()
        .map(|&i| {
            let w: Vec<f64> = (0..3).map(|k| pts[i][k] as f64 - c[k]).collect();
            let x: f64 = w.iter().zip(&u).map(|(a, b)| a * b).sum();
            let y: f64 = w.iter().zip(&v).map(|(a, b)| a * b).sum();
            (y.atan2(x), i)
        })
        .collect();
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0));
    keyed.into_iter().map(|(_, i)| i).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaceLatticeData {
    pub zf_basis: Vec<IntVec>,
    pub sat_basis: Vec<IntVec>,
    /// `[Sat(ℱ) : Zℱ]`, saturation taken inside `Z𝒜`.
    pub index: u64,
    pub monoid_generators: Vec<IntVec>,
}

/// Normalized volume of `conv(points)` with respect to the saturated lattice
/// of its affine span, by pyramids over the facets not containing a base
/// vertex.
pub fn normalized_volume(points: &[IntVec]) -> u64 {
    let Some(p0) = points.first() else { return 0 };
    let diffs: Vec<IntVec> = points.iter().map(|p| sub(p, p0)).collect();
    let n = p0.len();
    let l = Sublattice::generated_by(&diffs, n);
    let local: Vec<IntVec> = diffs
        .iter()
        .map(|d| l.saturation_coords(d).expect("in span"))
        .collect();
    nvol_full(&local)
}

fn nvol_full(local: &[IntVec]) -> u64 {
    let k = local.first().map_or(0, Vec::len);
    match k {
        0 => 1,
        1 => {
            let (lo, hi) = local
                .iter()
                .fold((i64::MAX, i64::MIN), |(a, b), p| (a.min(p[0]), b.max(p[0])));
            (hi - lo) as u64
        }
        _ => {
            let facets = hull::polytope_facets(local).expect("full-dimensional");
            let v0 = &local[0];
            facets
                .iter()
                .map(|(eta, b, on)| {
                    let h = dot(eta, v0) - b;
                    if h == 0 {
                        return 0;
                    }
                    let pts: Vec<IntVec> = on.iter().map(|&i| local[i].clone()).collect();
                    h as u64 * normalized_volume(&pts)
                })
                .sum()
        }
    }
}

/// `nvol(conv(τ) ∖ conv(τ ∖ 0))` for the monoid generated by `gens ⊂ Z^c`:
/// the sum over the bounded facets `η·x = m` of `conv(gens) + cone(gens)` of
/// `m · nvol(facet)`.
pub fn subdiagram_volume(gens: &[IntVec], c: usize) -> Result<u64> {
    if c == 0 {
        return Ok(1);
    }
    if gens.iter().any(|g| g.len() != c) {
        return Err(Error::Invariant(
            "generator length differs from codimension".into(),
        ));
    }
    if c == 1 {
        let pos = gens.iter().all(|g| g[0] > 0);
        let neg = gens.iter().all(|g| g[0] < 0);
        if gens.is_empty() || !(pos || neg) {
            return Err(Error::Degenerate("cone of the face is not pointed".into()));
        }
        return Ok(gens.iter().map(|g| g[0].unsigned_abs()).min().unwrap());
    }
    let mut rows: Vec<Vec<i128>> = Vec::new();
    for g in gens {
        rows.push(g.iter().map(|&x| i128::from(x)).chain([1]).collect());
    }
    for g in gens {
        rows.push(g.iter().map(|&x| i128::from(x)).chain([0]).collect());
    }
    let rays = hull::extreme_rays(&rows)
        .ok_or_else(|| Error::Degenerate("cone of the face is not full-dimensional".into()))?;
    let mut total = 0u64;
    for r in rays {
        let eta = &r.v[..c];
        let g = eta
            .iter()
            .fold(0i128, |g, &x| num_integer::Integer::gcd(&g, &x));
        if g == 0 {
            continue; // the face at infinity
        }
        let m = -r.v[c] / g;
        if m <= 0 {
            continue;
        }
        let contact: Vec<IntVec> = r
            .tight
            .iter()
            .filter(|&&i| i < gens.len())
            .map(|&i| gens[i].clone())
            .collect();
        total += m as u64 * normalized_volume(&contact);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(pts: &[&[i64]]) -> LatticePolytope {
        LatticePolytope::new(&pts.iter().map(|p| p.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn unit_simplices() {
        let s = poly(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(s.nvol(), 1);
        let t = poly(&[&[0, 0], &[1, 0], &[0, 1]]);
        let faces = t.face_lattice();
        assert_eq!(faces.iter().filter(|f| f.dim == 0).count(), 3);
        assert_eq!(faces.iter().filter(|f| f.dim == 1).count(), 3);
        assert_eq!(faces.iter().filter(|f| f.dim == 2).count(), 1);
    }

    #[test]
    fn single_point_and_segments() {
        let p = poly(&[&[2, 3]]);
        assert_eq!(p.dim(), 0);
        assert_eq!(p.face_lattice().len(), 1);
        let seg = poly(&[&[0, 0], &[3, 0]]);
        let e = seg.face_lattice().pop().unwrap();
        assert_eq!(seg.lattice_length(&e).unwrap(), 3);
        let seg = poly(&[&[0, 0], &[2, 4]]);
        let e = seg.face_lattice().pop().unwrap();
        assert_eq!(seg.lattice_length(&e).unwrap(), 2);
    }

    #[test]
    fn chain_triangle() {
        let t = poly(&[&[-1, 0], &[1, 0], &[0, 1], &[0, 0]]);
        assert_eq!(t.dim(), 2);
        assert_eq!(t.vertices().len(), 3);
        assert_eq!(t.nvol(), 2);
    }

    #[test]
    fn cube_volume_and_euler() {
        let mut pts = Vec::new();
        for i in 0..8i64 {
            pts.push(vec![i & 1, (i >> 1) & 1, (i >> 2) & 1]);
        }
        let c = LatticePolytope::new(&pts).unwrap();
        assert_eq!(c.nvol(), 6);
        let faces = c.face_lattice();
        let euler: i64 = faces
            .iter()
            .map(|f| if f.dim % 2 == 0 { 1 } else { -1 })
            .sum();
        assert_eq!(euler, 1);
        assert_eq!(faces.len(), 8 + 12 + 6 + 1);
    }

    #[test]
    fn subdiagram_examples() {
        let tau = vec![vec![1, 0], vec![2, 1], vec![3, 2], vec![2, -1], vec![3, -2]];
        assert_eq!(subdiagram_volume(&tau, 2).unwrap(), 4);
        assert_eq!(subdiagram_volume(&[vec![1, 0], vec![0, 1]], 2).unwrap(), 1);
        assert_eq!(subdiagram_volume(&[vec![1, 1], vec![1, -1]], 2).unwrap(), 2);
        assert_eq!(subdiagram_volume(&[vec![2], vec![3]], 1).unwrap(), 2);
        assert_eq!(subdiagram_volume(&[], 0).unwrap(), 1);
    }

    #[test]
    fn classification_of_a_square_pyramid() {
        // apex up: base face is the bottom square
        let p = poly(&[&[0, 0, 0], &[2, 0, 0], &[0, 2, 0], &[2, 2, 0], &[1, 1, 1]]);
        let faces = p.face_lattice();
        let kinds: Vec<FaceKind> = faces.iter().map(|f| p.classify(f)).collect();
        assert_eq!(kinds.iter().filter(|k| **k == FaceKind::Base).count(), 1);
        assert_eq!(kinds.iter().filter(|k| **k == FaceKind::Whole).count(), 1);
        assert_eq!(
            kinds.iter().filter(|k| **k == FaceKind::Vertical).count(),
            0
        );
    }

    #[test]
    fn off_output() {
        let s = poly(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let off = s.to_off().unwrap();
        assert!(off.starts_with("OFF\n4 4 0\n"));
        assert_eq!(off.lines().count(), 2 + 4 + 4);
    }
}
