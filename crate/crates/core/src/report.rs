//! Serializable analysis reports.
//!
//! Field order is the declaration order below and every collection is
//! sorted, so the same input and seed give byte-identical JSON.

use serde::{Serialize, Serializer};

use crate::analysis::Analysis;
use crate::bounds::{compute_bounds, BoundOptions, BoundReport};
use crate::error::Result;
use crate::graph::GraphDocument;
use crate::lattice::IntVec;
use crate::laurent::Params;
use crate::numeric::corners::{corner_critical_points, distinct_corner_count, CornerPoint};
use crate::numeric::oracle::{cpdeg_oracle_d1, OracleCount};
use crate::params::{derive_seed, params_to_json, random_params};
use crate::polytope::FaceKind;

pub(crate) fn ser_display<T: std::fmt::Display, S: Serializer>(
    v: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Seed tag for the parameters used at the corners and by the oracle.
pub const CORNER_TAG: u64 = u64::MAX;

#[derive(Debug, Clone, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

impl Default for ToolInfo {
    fn default() -> Self {
        Self {
            name: "cpdeg",
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DispersionSection {
    pub polynomial: String,
    /// Distinct exponents.
    pub terms: usize,
    /// Terms counted with parameter monomials; equals the cycle cover count
    /// since the expansion is cancellation-free.
    pub expanded_terms: usize,
    pub cycle_covers: usize,
    pub support: Vec<IntVec>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FacetEntry {
    pub normal: IntVec,
    pub offset: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PolytopeSection {
    pub dim: usize,
    pub vertices: Vec<IntVec>,
    pub facets: Vec<FacetEntry>,
    pub nvol: u64,
    /// `[Z^{d+1} : Z𝒜]`; absent when the polytope is not full-dimensional.
    pub lattice_index: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FaceEntry {
    pub id: usize,
    pub dim: usize,
    pub kind: FaceKind,
    pub normal: IntVec,
    pub points: Vec<IntVec>,
    pub nvol: u64,
    pub mu: u64,
    /// `[Sat(ℱ) : Zℱ]` inside `Z𝒜`.
    pub index: u64,
    /// `[Sat(ℱ) : Zℱ]` inside `Z^{d+1}`.
    pub index_ambient: u64,
    pub disconnected: bool,
    pub vertical_loops: bool,
    pub initial_form: String,
    /// Non-monomial factors of the initial form, one per block.
    pub factors: Vec<String>,
    /// Seed of the first parameter draw for this face.
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CornerSection {
    pub params: serde_json::Value,
    pub seed: Option<u64>,
    pub distinct: usize,
    pub points: Vec<CornerPoint>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub tool: ToolInfo,
    pub seed: u64,
    pub graph: GraphDocument,
    pub params: Option<serde_json::Value>,
    pub dispersion: DispersionSection,
    pub polytope: PolytopeSection,
    pub faces: Vec<FaceEntry>,
    pub bounds: BoundReport,
    pub corners: CornerSection,
    /// Independent critical point count (one-dimensional graphs only).
    pub oracle: Option<OracleCount>,
}

#[derive(Debug, Clone, Default)]
pub struct ReportOptions {
    pub params: Option<Params>,
    pub seed: u64,
    pub refine: bool,
}

impl ReportOptions {
    pub fn bound_options(&self) -> BoundOptions {
        BoundOptions {
            params: self.params.clone(),
            seed: self.seed,
            refine: self.refine,
        }
    }

    /// Parameters for the corners and the oracle, and the seed they came from.
    pub fn numeric_params(&self, an: &Analysis) -> (Params, Option<u64>) {
        match &self.params {
            Some(p) => (p.clone(), None),
            None => {
                let seed = derive_seed(self.seed, CORNER_TAG);
                (random_params(&an.graph.symbols(), seed), Some(seed))
            }
        }
    }
}

pub fn dispersion_section(an: &Analysis) -> DispersionSection {
    DispersionSection {
        polynomial: an.phi.to_string(),
        terms: an.phi.num_terms(),
        expanded_terms: an.phi.num_expanded_terms(),
        cycle_covers: an.covers.len(),
        support: an.phi.support(),
    }
}

pub fn polytope_section(an: &Analysis) -> PolytopeSection {
    let p = &an.polytope;
    PolytopeSection {
        dim: p.dim(),
        vertices: p.vertex_points(),
        facets: p
            .facets()
            .iter()
            .map(|f| FacetEntry {
                normal: f.normal.clone(),
                offset: f.offset,
            })
            .collect(),
        nvol: p.nvol(),
        lattice_index: p.lattice_index(),
    }
}

pub fn face_table(an: &Analysis, opts: &ReportOptions) -> Result<Vec<FaceEntry>> {
    let p = &an.polytope;
    an.faces
        .iter()
        .map(|face| {
            let ia = an.initial(face)?;
            Ok(FaceEntry {
                id: face.id,
                dim: face.dim,
                kind: ia.kind,
                normal: face.normal.clone(),
                points: p.face_points(face),
                nvol: p.face_nvol(face),
                mu: p.subdiagram_volume(face)?,
                index: p.lattice_data(face).index,
                index_ambient: p.face_sublattice(face).index_in_saturation(),
                disconnected: ia.is_asymptotically_disconnected(),
                vertical_loops: ia.has_vertical_loops(),
                initial_form: ia.factored_product().to_string(),
                factors: ia
                    .nonmonomial_components()
                    .map(|c| c.factor.to_string())
                    .collect(),
                seed: opts
                    .params
                    .is_none()
                    .then(|| derive_seed(opts.seed, (face.id as u64) << 8)),
            })
        })
        .collect()
}

pub fn corner_section(an: &Analysis, opts: &ReportOptions) -> Result<CornerSection> {
    let (params, seed) = opts.numeric_params(an);
    let points = corner_critical_points(&an.graph, &an.system, &params)?;
    Ok(CornerSection {
        params: params_to_json(&params),
        seed,
        distinct: distinct_corner_count(&points),
        points,
    })
}

pub fn build_report(an: &Analysis, opts: &ReportOptions) -> Result<AnalysisReport> {
    let oracle = if an.dim() == 1 {
        let (params, _) = opts.numeric_params(an);
        // A degenerate draw is an honest outcome, not a failure of the report.
        cpdeg_oracle_d1(&an.graph, &params).ok()
    } else {
        None
    };
    Ok(AnalysisReport {
        tool: ToolInfo::default(),
        seed: opts.seed,
        graph: an.graph.to_document(),
        params: opts.params.as_ref().map(params_to_json),
        dispersion: dispersion_section(an),
        polytope: polytope_section(an),
        faces: face_table(an, opts)?,
        bounds: compute_bounds(an, &opts.bound_options())?,
        corners: corner_section(an, opts)?,
        oracle,
    })
}
