//! Shared corpus and property checks for the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use cpdeg_core::analysis::Analysis;
use cpdeg_core::dispersion::floquet_matrix_numeric;
use cpdeg_core::graph::{EdgeSpec, GraphDocument, PeriodicGraph};
use cpdeg_core::initial::initial_matrix;
use cpdeg_core::laurent::{Exponent, ParamMonomial};
use cpdeg_core::params::random_params;
use cpdeg_core::polytope::FaceKind;
use cpdeg_core::LaurentPoly;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

pub type Check = Result<(), String>;

const NAMES: [&str; 3] = ["u", "v", "w"];

pub fn fixture(name: &str) -> PeriodicGraph {
    let path = format!("{}/../../fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"));
    cpdeg_core::graph::parse_graph(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// A graph on `n` vertices from `(from, to, shift)` triples; `None` when the
/// document is rejected.
pub fn build_graph(
    d: usize,
    n: usize,
    edges: &[(usize, usize, Vec<i64>)],
) -> Option<PeriodicGraph> {
    let doc = GraphDocument {
        d,
        vertices: NAMES[..n].iter().map(|s| s.to_string()).collect(),
        edges: edges
            .iter()
            .enumerate()
            .map(|(i, (f, t, s))| EdgeSpec {
                from: NAMES[*f].into(),
                to: NAMES[*t].into(),
                shift: s.clone(),
                weight: format!("e{i}"),
            })
            .collect(),
        potentials: BTreeMap::new(),
    };
    PeriodicGraph::from_document(&doc).ok()
}

/// An analysis with a full-dimensional Newton polytope, or `None`.
pub fn full_dimensional(g: PeriodicGraph) -> Option<Analysis> {
    let an = Analysis::new(g).ok()?;
    an.polytope.is_full_dimensional().then_some(an)
}

/// Random small graph: `d ≤ 2`, at most three vertices, shifts in `{-1,0,1}^d`.
pub fn random_graph(rng: &mut impl Rng) -> Option<Analysis> {
    let d = rng.gen_range(1..=2);
    let n = rng.gen_range(1..=3);
    let m = rng.gen_range(1..=4);
    let edges: Vec<_> = (0..m)
        .map(|_| {
            let f = rng.gen_range(0..n);
            let t = rng.gen_range(0..n);
            let s = (0..d).map(|_| rng.gen_range(-1..=1)).collect();
            (f, t, s)
        })
        .collect();
    full_dimensional(build_graph(d, n, &edges)?)
}

/// Fifty full-dimensional graphs drawn deterministically from `seed`.
pub fn corpus(seed: u64) -> Vec<Analysis> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < 50 {
        if let Some(an) = random_graph(&mut rng) {
            out.push(an);
        }
    }
    out
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn reciprocity_and_monic(an: &Analysis) -> Check {
    let phi = &an.phi;
    let n = an.graph.num_vertices() as i64;
    ensure(phi.reciprocal() == *phi, || {
        format!("Φ is not reciprocal: {phi}")
    })?;
    ensure(phi.lambda_degree() == Some(n), || {
        format!("λ-degree of {phi} is not {n}")
    })?;
    ensure(
        phi.lambda_coefficient(n) == LaurentPoly::one(an.dim()),
        || format!("Φ is not monic in λ: {phi}"),
    )
}

/// Every monomial of every Leibniz term of `M` appears in `Φ` with the same
/// sign, and the terms sum to `Φ`.
pub fn cancellation_free(an: &Analysis) -> Check {
    let m = an.quotient.adjacency_matrix();
    let terms = m.leibniz_terms().map_err(|e| e.to_string())?;
    let support = an.phi.support();
    let mut signs: BTreeMap<(Exponent, ParamMonomial), bool> = BTreeMap::new();
    let mut sum = LaurentPoly::zero(an.dim());
    for (perm, t) in &terms {
        sum = sum.add(t);
        for (e, c) in t.terms() {
            ensure(support.contains(e), || {
                format!("term of {perm:?} leaves supp Φ at {e:?}")
            })?;
            for (mono, k) in c.terms() {
                let pos = k.sign() == num_bigint::Sign::Plus;
                if let Some(&prev) = signs.get(&(e.clone(), mono.clone())) {
                    ensure(prev == pos, || format!("sign clash at {e:?} · {mono}"))?;
                }
                signs.insert((e.clone(), mono.clone()), pos);
            }
        }
    }
    ensure(sum == an.phi, || "Leibniz terms do not sum to Φ".into())
}

/// `det(in_η M) = in_η Φ`, vertical loops ⇔ vertical face, and the factored
/// product agrees, on every proper face.
pub fn initial_forms(an: &Analysis) -> Check {
    for face in &an.faces {
        let kind = an.kind(face);
        if kind == FaceKind::Whole {
            continue;
        }
        let eta = &face.normal;
        let (inphi, _) = an.phi.initial_form(eta).map_err(|e| e.to_string())?;
        let det = initial_matrix(&an.quotient, &an.covers, eta)
            .leibniz_det()
            .map_err(|e| e.to_string())?;
        ensure(det == inphi, || {
            format!("face {}: det(in M) = {det} ≠ {inphi}", face.id)
        })?;
        let ia = an.initial(face).map_err(|e| e.to_string())?;
        ensure(
            ia.has_vertical_loops() == (kind == FaceKind::Vertical),
            || format!("face {} ({kind:?}): loop criterion disagrees", face.id),
        )?;
        ensure(ia.factored_product() == inphi, || {
            format!("face {}: factors do not multiply to in Φ", face.id)
        })?;
    }
    Ok(())
}

pub fn euler_pairing(an: &Analysis) -> Check {
    for face in an.faces.iter().filter(|f| an.kind(f) != FaceKind::Whole) {
        let (inphi, _) = an
            .phi
            .initial_form(&face.normal)
            .map_err(|e| e.to_string())?;
        let p = inphi
            .euler_pairing(&face.normal)
            .map_err(|e| e.to_string())?;
        ensure(p.is_zero(), || {
            format!("face {}: Euler pairing is {p}", face.id)
        })?;
    }
    Ok(())
}

pub fn kushnirenko_integrality(an: &Analysis) -> Check {
    for face in &an.faces {
        let nvol = an.polytope.face_nvol(face);
        let k = an.polytope.face_sublattice(face).index_in_saturation();
        ensure(nvol.is_multiple_of(k), || {
            format!("face {}: nvol {nvol} not divisible by index {k}", face.id)
        })?;
    }
    Ok(())
}

/// At a point of the real torus `H(z)` is Hermitian; its `|W|` real
/// eigenvalues are the sheets of the Bloch variety over `z`.
pub fn eigenvalue_sheets(an: &Analysis, seed: u64) -> Check {
    use rand::SeedableRng;
    let params = random_params(&an.graph.symbols(), seed);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let z: Vec<Complex64> = (0..an.dim())
        .map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)))
        .collect();
    let h = floquet_matrix_numeric(&an.graph, &params, &z).map_err(|e| e.to_string())?;
    let herm: DMatrix<Complex64> = h.adjoint();
    ensure((&h - herm).norm() <= 1e-9 * h.norm().max(1.0), || {
        "H(z) is not Hermitian".into()
    })?;
    let eig = nalgebra::SymmetricEigen::new(h).eigenvalues;
    let f = an.phi.specialize(&params).map_err(|e| e.to_string())?;
    for &l in eig.iter() {
        let mut pt = z.clone();
        pt.push(Complex64::new(l, 0.0));
        let v = f.evaluate(&pt).map_err(|e| e.to_string())?.norm();
        let scale = f.magnitude(&pt).max(1.0);
        ensure(v <= 1e-8 * scale, || format!("Φ(z, {l}) = {v:e}"))?;
    }
    Ok(())
}

/// Run `check` over a corpus, reporting the first failure with its index.
pub fn over(corpus: &[Analysis], check: impl Fn(&Analysis) -> Check) -> Check {
    for (i, an) in corpus.iter().enumerate() {
        check(an).map_err(|e| format!("graph #{i}: {e}"))?;
    }
    Ok(())
}
