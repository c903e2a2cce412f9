//! Upper and lower bounds on the number of critical points.
//!
//! The upper bound subtracts from `nvol(A)` the solutions that escape to the
//! boundary of the toric variety: those on orbits of vertical faces
//! (`N_vert`) and the forced singular points on two-dimensional oblique
//! faces whose initial graph is disconnected (`N_disc`). Both are scaled by
//! the multiplicity `μ · [Sat(ℱ) : Zℱ]` of the orbit.
//!
//! Counts that need numbers are done at random rational parameters (or the
//! supplied ones); each face gets its own seed so results do not depend on
//! the order faces are visited in.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;

use crate::analysis::Analysis;
use crate::error::{Error, Result};
use crate::initial::InitialFaceAnalysis;
use crate::lattice::{dot, extend_to_unimodular, scale, sub, unimodular_inverse, vec_mat, IntVec};
use crate::laurent::{rat_to_f64, Params, RatLaurent};
use crate::numeric::solve_bivariate;
use crate::numeric::unipoly::UniPoly;
use crate::params::{derive_seed, random_params};
use crate::polytope::{Face, FaceKind};

/// Fresh parameter draws tried before a face is given up as degenerate.
pub const RETRIES: u64 = 5;
/// Relative size below which a derivative counts as zero.
const VANISH_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMethod {
    /// `deg X_ℱ`, valid when every vertical face is a facet.
    Degree,
    /// Solutions of the initial system on the orbit.
    Orbit,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerticalFace {
    pub face_id: usize,
    pub dim: usize,
    pub normal: IntVec,
    pub mu: u64,
    pub index: u64,
    pub count: u64,
    pub method: CountMethod,
    pub contribution: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DisconnectedFace {
    pub face_id: usize,
    pub normal: IntVec,
    pub mu: u64,
    pub index: u64,
    pub components: usize,
    /// `Σ MA(𝒩_i, 𝒩_j)` with areas normalized to `Zℱ`.
    pub mixed_area: u64,
    pub contribution: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnsupportedFace {
    pub face_id: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularPoint {
    /// Orbit coordinates, as `[re, im]` pairs.
    pub sigma: [[f64; 2]; 2],
    /// `1` if the closure of the Bloch variety is smooth there, `2` if it
    /// has a nondegenerate double point; `None` if neither is certified.
    pub multiplicity: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RefinedFace {
    pub face_id: usize,
    pub points: Vec<SingularPoint>,
    pub certified: bool,
    /// The certified multiplicity sum, or the unrefined `N_disc(F)`.
    pub contribution: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Refinement {
    pub faces: Vec<RefinedFace>,
    pub n_disc: u64,
    pub cpdeg_upper: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub nvol: u64,
    pub lattice_index: u64,
    pub facet_only_vertical: bool,
    pub n_vert: u64,
    pub vertical: Vec<VerticalFace>,
    pub n_disc: u64,
    pub disconnected: Vec<DisconnectedFace>,
    pub cpdeg_upper: i64,
    /// `2^d · |W|` critical points at the corners of the real torus.
    pub corner_lower: u64,
    pub unsupported_faces: Vec<UnsupportedFace>,
    pub refinement: Option<Refinement>,
}

#[derive(Debug, Clone, Default)]
pub struct BoundOptions {
    /// Fixed parameters; random draws per face when absent.
    pub params: Option<Params>,
    pub seed: u64,
    pub refine: bool,
}

impl BoundOptions {
    fn face_params(&self, an: &Analysis, face_id: usize, attempt: u64) -> Params {
        match &self.params {
            Some(p) => p.clone(),
            None => random_params(
                &an.graph.symbols(),
                derive_seed(self.seed, (face_id as u64) << 8 | attempt),
            ),
        }
    }

    /// Runs `f` with fresh parameters until it stops reporting `Degenerate`.
    fn with_retries<T>(
        &self,
        an: &Analysis,
        face_id: usize,
        mut f: impl FnMut(&Params) -> Result<T>,
    ) -> Result<T> {
        let attempts = if self.params.is_some() { 1 } else { RETRIES };
        let mut last = None;
        for attempt in 0..attempts {
            match f(&self.face_params(an, face_id, attempt)) {
                Err(Error::Degenerate(m)) => last = Some(m),
                other => return other,
            }
        }
        Err(Error::Degenerate(last.unwrap_or_default()))
    }
}

fn e_lambda(n: usize) -> IntVec {
    let mut e = vec![0; n];
    e[n - 1] = 1;
    e
}

/// Number of solutions of the initial critical point system on the orbit
/// of a vertical face of dimension 1 or 2.
///
/// On the orbit, `in Φ = t^b f(σ, λ)` and the equations reduce to `f = 0`
/// (dimension 1) or `f = σ ∂f/∂σ = 0` (dimension 2), where `λ` and `σ` are
/// coordinates from a basis of `Sat(ℱ)` containing `e_λ`.
pub fn count_orbit_solutions(an: &Analysis, face: &Face, params: &Params) -> Result<u64> {
    let (init, _) = an.phi.initial_form(&face.normal)?;
    let f = init.specialize(params)?;
    if f.is_zero() {
        return Err(Error::Degenerate(format!(
            "initial form of face {} vanishes at these parameters",
            face.id
        )));
    }
    let n = an.dim() + 1;
    let sat = an.polytope.face_sublattice(face);
    let u = sat
        .saturation_coords(&e_lambda(n))
        .ok_or_else(|| Error::Invariant(format!("face {} is not vertical", face.id)))?;
    let base = f.terms.keys().next().unwrap().clone();
    let coords = |p: &[i64]| {
        sat.saturation_coords(&sub(p, &base)).ok_or_else(|| {
            Error::Invariant(format!("initial form leaves the span of face {}", face.id))
        })
    };
    match face.dim {
        1 => {
            let mut by_power: BTreeMap<i64, BigRational> = BTreeMap::new();
            for (p, c) in &f.terms {
                *by_power.entry(coords(p)?[0] * u[0]).or_default() += c;
            }
            let lo = *by_power.keys().next().unwrap();
            let hi = *by_power.keys().last().unwrap();
            let mut coeffs = vec![BigRational::default(); (hi - lo + 1) as usize];
            for (k, c) in by_power {
                coeffs[(k - lo) as usize] = c;
            }
            let p = UniPoly::new(coeffs).strip_zero_roots();
            Ok(p.degree().unwrap_or(0) as u64)
        }
        2 => {
            let m = extend_to_unimodular(&u);
            let minv = unimodular_inverse(&m);
            let mut terms = BTreeMap::new();
            for (p, c) in &f.terms {
                let y = vec_mat(&coords(p)?, &minv);
                // Second basis vector is σ, the first is e_λ.
                terms.insert(vec![y[1], y[0]], c.clone());
            }
            let ft = RatLaurent { d: 1, terms };
            let g = ft.log_derivative(0);
            if g.is_zero() {
                return Err(Error::Degenerate(format!(
                    "initial form of face {} does not involve the orbit's horizontal direction",
                    face.id
                )));
            }
            Ok(solve_bivariate(&ft, &g)?.points.len() as u64)
        }
        k => Err(Error::Unsupported(format!(
            "solutions on the orbit of the {k}-dimensional vertical face {}",
            face.id
        ))),
    }
}

pub fn compute_bounds(an: &Analysis, opts: &BoundOptions) -> Result<BoundReport> {
    let poly = &an.polytope;
    let lattice_index = poly
        .lattice_index()
        .ok_or_else(|| Error::Degenerate("the Newton polytope is not full-dimensional".into()))?;
    let nvol = poly.nvol();

    let vertical_faces: Vec<&Face> = an.faces_of_kind(FaceKind::Vertical).collect();
    let facet_only_vertical = vertical_faces.iter().all(|f| f.dim + 1 == poly.dim());
    let mut vertical = Vec::new();
    let mut unsupported_faces = Vec::new();
    for face in vertical_faces {
        let mu = poly.subdiagram_volume(face)?;
        let index = poly.lattice_data(face).index;
        let (count, method) = if facet_only_vertical {
            let zf_index = poly.face_sublattice(face).index_in_saturation();
            let nv = poly.face_nvol(face);
            if !nv.is_multiple_of(zf_index) {
                return Err(Error::Invariant(format!(
                    "normalized volume {nv} of face {} is not divisible by its index {zf_index}",
                    face.id
                )));
            }
            (nv / zf_index, CountMethod::Degree)
        } else {
            match opts.with_retries(an, face.id, |p| count_orbit_solutions(an, face, p)) {
                Ok(c) => (c, CountMethod::Orbit),
                Err(e @ (Error::Unsupported(_) | Error::Degenerate(_))) => {
                    unsupported_faces.push(UnsupportedFace {
                        face_id: face.id,
                        reason: e.to_string(),
                    });
                    (0, CountMethod::Orbit)
                }
                Err(e) => return Err(e),
            }
        };
        vertical.push(VerticalFace {
            face_id: face.id,
            dim: face.dim,
            normal: face.normal.clone(),
            mu,
            index,
            count,
            method,
            contribution: mu * index * count,
        });
    }
    let n_vert = vertical.iter().map(|v| v.contribution).sum();

    let mut disconnected = Vec::new();
    let mut initials = Vec::new();
    for face in an.faces_of_kind(FaceKind::Oblique).filter(|f| f.dim == 2) {
        let ia = an.initial(face)?;
        if !ia.is_asymptotically_disconnected() {
            continue;
        }
        let mu = poly.subdiagram_volume(face)?;
        let index = poly.lattice_data(face).index;
        // Polygons are in Sat(ℱ) coordinates; renormalize areas to Zℱ.
        let zf_index = poly.face_sublattice(face).index_in_saturation();
        let mixed_area = ia.mixed_area_sum() / zf_index;
        disconnected.push(DisconnectedFace {
            face_id: face.id,
            normal: face.normal.clone(),
            mu,
            index,
            components: ia.nonmonomial_components().count(),
            mixed_area,
            contribution: mu * index * mixed_area,
        });
        initials.push((face, ia));
    }
    let n_disc = disconnected.iter().map(|f| f.contribution).sum();

    let upper = |n: u64| nvol as i64 - (lattice_index * n) as i64;
    let cpdeg_upper = upper(n_vert + n_disc);
    let corner_lower = (1u64 << an.dim()) * an.graph.num_vertices() as u64;
    if corner_lower as i64 > cpdeg_upper {
        return Err(Error::Invariant(format!(
            "corner lower bound {corner_lower} exceeds the upper bound {cpdeg_upper}"
        )));
    }

    let refinement = if opts.refine {
        let mut faces = Vec::new();
        for ((face, ia), disc) in initials.iter().zip(&disconnected) {
            faces.push(refine_face(an, face, ia, disc, opts)?);
        }
        let n_disc: u64 = faces.iter().map(|f| f.contribution).sum();
        Some(Refinement {
            faces,
            n_disc,
            cpdeg_upper: upper(n_vert + n_disc),
        })
    } else {
        None
    };

    Ok(BoundReport {
        nvol,
        lattice_index,
        facet_only_vertical,
        n_vert,
        vertical,
        n_disc,
        disconnected,
        cpdeg_upper,
        corner_lower,
        unsupported_faces,
        refinement,
    })
}

fn uncertified(face: &Face, disc: &DisconnectedFace, points: Vec<SingularPoint>) -> RefinedFace {
    RefinedFace {
        face_id: face.id,
        points,
        certified: false,
        contribution: disc.contribution,
    }
}

/// Local analysis at the singular points of the initial Bloch variety on a
/// disconnected facet of a two-dimensional graph.
///
/// Choose `v` with `η·v = 1` so that `Z^3 = Zℱ ⊕ Zv`; with `σ` coordinates
/// on `Zℱ` and `ρ = t^v`, `t^{-b} Φ` is a polynomial in `ρ` whose constant
/// term is the initial form. At a point where two factors meet, the closure
/// is smooth iff `∂Φ/∂ρ ≠ 0`; otherwise a full-rank Hessian makes it a
/// nondegenerate double point.
fn refine_face(
    an: &Analysis,
    face: &Face,
    ia: &InitialFaceAnalysis,
    disc: &DisconnectedFace,
    opts: &BoundOptions,
) -> Result<RefinedFace> {
    let poly = &an.polytope;
    let sat = poly.face_sublattice(face);
    let applicable = an.dim() == 2
        && face.dim + 1 == poly.dim()
        && disc.mu == 1
        && disc.index == 1
        && sat.index_in_saturation() == 1;
    if !applicable {
        return Ok(uncertified(face, disc, Vec::new()));
    }
    let eta = &face.normal;
    let v: IntVec = {
        let inv = unimodular_inverse(&extend_to_unimodular(eta));
        inv.iter().map(|row| row[0]).collect()
    };
    debug_assert_eq!(dot(eta, &v), 1);
    let b = poly.point(face.points[0]).clone();
    let expected = ia.mixed_area_sum();

    let result = opts.with_retries(an, face.id, |params| {
        // t^{-b} Φ by (σ exponents, ρ exponent), truncated at ρ^2.
        let phi = an.phi.specialize(params)?;
        let mut local: Vec<([i64; 2], i64, f64)> = Vec::new();
        for (p, c) in &phi.terms {
            let q = sub(p, &b);
            let h = dot(eta, &q);
            if h > 2 {
                continue;
            }
            let s = sat
                .saturation_coords(&sub(&q, &scale(&v, h)))
                .ok_or_else(|| {
                    Error::Invariant("local coordinates do not span the lattice".into())
                })?;
            local.push(([s[0], s[1]], h, rat_to_f64(c)));
        }
        let factors = ia
            .nonmonomial_components()
            .map(|comp| {
                let g = comp.factor.specialize(params)?;
                let base = g.terms.keys().next().unwrap().clone();
                let mut terms = BTreeMap::new();
                for (p, c) in &g.terms {
                    let s = sat
                        .saturation_coords(&sub(p, &base))
                        .ok_or_else(|| Error::Invariant("factor leaves the face".into()))?;
                    terms.insert(s, c.clone());
                }
                Ok(RatLaurent { d: 1, terms })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut points = Vec::new();
        for i in 0..factors.len() {
            for j in i + 1..factors.len() {
                for s in solve_bivariate(&factors[i], &factors[j])?.points {
                    points.push(SingularPoint {
                        sigma: [[s[0].re, s[0].im], [s[1].re, s[1].im]],
                        multiplicity: local_multiplicity(&local, s),
                    });
                }
            }
        }
        Ok(points)
    });
    let points = match result {
        Ok(p) => p,
        Err(Error::Degenerate(_)) => return Ok(uncertified(face, disc, Vec::new())),
        Err(e) => return Err(e),
    };
    let certified =
        points.len() as u64 == expected && points.iter().all(|p| p.multiplicity.is_some());
    if !certified {
        return Ok(uncertified(face, disc, points));
    }
    let contribution = points.iter().map(|p| p.multiplicity.unwrap() as u64).sum();
    Ok(RefinedFace {
        face_id: face.id,
        points,
        certified,
        contribution,
    })
}

/// Multiplicity at `(σ, ρ = 0)`. Since the `σ`-gradient vanishes there, the
/// Hessian is taken in `(log σ_1, log σ_2, ρ)`, which only changes it by a
/// diagonal congruence but keeps it well scaled.
fn local_multiplicity(local: &[([i64; 2], i64, f64)], s: [Complex64; 2]) -> Option<u32> {
    let mut d_rho = Complex64::default();
    let mut scale1 = 0.0;
    let mut hess = DMatrix::<Complex64>::zeros(3, 3);
    for &(e, h, c) in local {
        let m = s[0].powi(e[0] as i32) * s[1].powi(e[1] as i32) * c;
        let ef = [e[0] as f64, e[1] as f64];
        match h {
            0 => {
                for a in 0..2 {
                    for b in 0..2 {
                        hess[(a, b)] += m * ef[a] * ef[b];
                    }
                }
            }
            1 => {
                d_rho += m;
                scale1 += m.norm();
                for a in 0..2 {
                    hess[(a, 2)] += m * ef[a];
                    hess[(2, a)] += m * ef[a];
                }
            }
            _ => hess[(2, 2)] += m * 2.0,
        }
    }
    if scale1 > 0.0 && d_rho.norm() > VANISH_TOL * scale1 {
        return Some(1);
    }
    let sv = hess.singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    (max > 0.0 && min > VANISH_TOL * max).then_some(2)
}
