//! Initial graphs and initial matrices of faces of the Newton polytope.
//!
//! The initial graph of `η` keeps the edges of `Γ̂` lying in some cycle cover
//! whose weight minimizes `η`; its adjacency matrix is the initial matrix,
//! whose determinant is `in_η Φ`. Weakly connected components split the
//! matrix into blocks, which factors `in_η Φ`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::dispersion::CycleCover;
use crate::error::{Error, Result};
use crate::graph::{EdgeLabel, QuotientGraph};
use crate::lattice::{dot, sub, IntVec};
use crate::laurent::{LaurentPoly, SymbolicMatrix};
use crate::polytope::{Face, FaceKind, LatticePolytope};

/// Indices of the edges of the initial graph in direction `eta`.
pub fn initial_edges(covers: &[CycleCover], eta: &[i64]) -> BTreeSet<usize> {
    let score = |c: &CycleCover| dot(&c.exponent(), eta);
    let Some(min) = covers.iter().map(score).min() else {
        return BTreeSet::new();
    };
    covers
        .iter()
        .filter(|c| score(c) == min)
        .flat_map(|c| c.edges.iter().copied())
        .collect()
}

pub fn initial_graph(q: &QuotientGraph, covers: &[CycleCover], eta: &[i64]) -> QuotientGraph {
    q.edge_subgraph(&initial_edges(covers, eta))
}

pub fn initial_matrix(q: &QuotientGraph, covers: &[CycleCover], eta: &[i64]) -> SymbolicMatrix {
    initial_graph(q, covers, eta).adjacency_matrix()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    pub vertices: Vec<usize>,
    pub is_monomial: bool,
    /// Determinant of the diagonal block.
    #[serde(serialize_with = "crate::report::ser_display")]
    pub factor: LaurentPoly,
    /// Support of the factor in coordinates of `Sat(ℱ)`, relative to its
    /// first exponent.
    pub polygon: Vec<IntVec>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InitialFaceAnalysis {
    pub face_id: usize,
    pub normal: IntVec,
    pub kind: FaceKind,
    pub edges: BTreeSet<usize>,
    pub graph: QuotientGraph,
    pub matrix: SymbolicMatrix,
    pub components: Vec<Component>,
    /// Product of the monomial blocks.
    pub gamma: LaurentPoly,
}

impl InitialFaceAnalysis {
    /// Some vertex carries both the `λ` loop and the `−V` loop.
    pub fn has_vertical_loops(&self) -> bool {
        (0..self.graph.num_vertices()).any(|v| {
            let loops = self
                .graph
                .edges()
                .iter()
                .filter(|e| e.tail == v && e.head == v);
            let mut lam = false;
            let mut pot = false;
            for e in loops {
                match e.label {
                    EdgeLabel::Lambda => lam = true,
                    EdgeLabel::Potential { .. } => pot = true,
                    EdgeLabel::Hop { .. } => {}
                }
            }
            lam && pot
        })
    }

    pub fn nonmonomial_components(&self) -> impl Iterator<Item = &Component> {
        self.components.iter().filter(|c| !c.is_monomial)
    }

    pub fn is_asymptotically_disconnected(&self) -> bool {
        self.nonmonomial_components().count() >= 2
    }

    /// `γ · Π g_i` over the non-monomial factors.
    pub fn factored_product(&self) -> LaurentPoly {
        self.nonmonomial_components()
            .fold(self.gamma.clone(), |acc, c| acc.mul(&c.factor))
    }

    /// Sum of pairwise mixed areas of the non-monomial factor polygons.
    pub fn mixed_area_sum(&self) -> u64 {
        let polys: Vec<&Component> = self.nonmonomial_components().collect();
        let mut s = 0;
        for i in 0..polys.len() {
            for j in i + 1..polys.len() {
                s += crate::planar::mixed_area(&polys[i].polygon, &polys[j].polygon);
            }
        }
        s
    }
}

pub fn analyze_face(
    q: &QuotientGraph,
    covers: &[CycleCover],
    polytope: &LatticePolytope,
    face: &Face,
) -> Result<InitialFaceAnalysis> {
    let eta = &face.normal;
    let edges = initial_edges(covers, eta);
    let graph = q.edge_subgraph(&edges);
    let matrix = graph.adjacency_matrix();
    let sat = polytope.face_sublattice(face);
    let d = q.dim();

    let mut components = Vec::new();
    let mut gamma = LaurentPoly::one(d);
    for vs in graph.weak_components() {
        let factor = matrix.principal_submatrix(&vs).leibniz_det()?;
        if factor.is_zero() {
            return Err(Error::Invariant(
                "a block of the initial matrix is singular".into(),
            ));
        }
        let is_monomial = factor.is_monomial();
        let support = factor.support();
        let base = &support[0];
        let polygon = support
            .iter()
            .map(|p| {
                sat.saturation_coords(&sub(p, base)).ok_or_else(|| {
                    Error::Invariant(format!(
                        "factor support leaves the span of face {}",
                        face.id
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if is_monomial {
            gamma = gamma.mul(&factor);
        }
        components.push(Component {
            vertices: vs,
            is_monomial,
            factor,
            polygon,
        });
    }
    Ok(InitialFaceAnalysis {
        face_id: face.id,
        normal: eta.clone(),
        kind: polytope.classify(face),
        edges,
        graph,
        matrix,
        components,
        gamma,
    })
}
