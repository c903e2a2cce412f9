//! The shared front half of every computation: quotient graph, cycle covers,
//! dispersion polynomial, critical point system, Newton polytope and faces.

use crate::dispersion::{
    critical_point_system, cycle_covers, dispersion_polynomial, CriticalPointSystem, CycleCover,
};
use crate::error::Result;
use crate::graph::{build_quotient_graph, PeriodicGraph, QuotientGraph};
use crate::initial::{analyze_face, InitialFaceAnalysis};
use crate::laurent::LaurentPoly;
use crate::polytope::{Face, FaceKind, LatticePolytope};

#[derive(Debug, Clone)]
pub struct Analysis {
    pub graph: PeriodicGraph,
    pub quotient: QuotientGraph,
    pub covers: Vec<CycleCover>,
    pub phi: LaurentPoly,
    pub system: CriticalPointSystem,
    pub polytope: LatticePolytope,
    pub faces: Vec<Face>,
}

impl Analysis {
    pub fn new(graph: PeriodicGraph) -> Result<Self> {
        let quotient = build_quotient_graph(&graph);
        let covers = cycle_covers(&quotient)?;
        let phi = dispersion_polynomial(&quotient)?;
        let system = critical_point_system(&phi)?;
        let polytope = LatticePolytope::new(&phi.support())?;
        let faces = polytope.face_lattice();
        Ok(Self {
            graph,
            quotient,
            covers,
            phi,
            system,
            polytope,
            faces,
        })
    }

    pub fn dim(&self) -> usize {
        self.graph.dim()
    }

    pub fn kind(&self, face: &Face) -> FaceKind {
        self.polytope.classify(face)
    }

    /// Proper faces of the given kind.
    pub fn faces_of_kind(&self, kind: FaceKind) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(move |f| self.kind(f) == kind)
    }

    pub fn initial(&self, face: &Face) -> Result<InitialFaceAnalysis> {
        analyze_face(&self.quotient, &self.covers, &self.polytope, face)
    }
}
