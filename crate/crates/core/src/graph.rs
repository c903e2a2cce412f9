//! Z^d-periodic graphs and their labeled quotient multigraphs.
//!
//! An edge `{from: u, to: v, shift: α, weight: e}` says that `u` is adjacent
//! to the translate `α + v`. It contributes `e·z^α` to the entry `(u, v)` of
//! the characteristic matrix `M = λI − H(z)` and `e·z^{-α}` to `(v, u)`.
//!
//! Sign convention: inside `M` the potential loop at `v` carries `−V(v)`, the
//! spectral loop carries `λ`, and a hop carries `+e·z^α`. The Floquet matrix
//! is then `H(z) = λI − M`, with `−e·z^α` off the diagonal.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::{is_reserved_name, LaurentPoly, SymbolicMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub from: String,
    pub to: String,
    pub shift: Vec<i64>,
    pub weight: String,
}

/// The on-disk graph description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub d: usize,
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<EdgeSpec>,
    #[serde(default)]
    pub potentials: BTreeMap<String, String>,
}

/// A stored undirected edge, canonically oriented.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub shift: Vec<i64>,
    pub weight: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicGraph {
    d: usize,
    vertices: Vec<String>,
    edges: Vec<Edge>,
    potentials: Vec<String>,
}

fn canonical(from: usize, to: usize, shift: Vec<i64>) -> (usize, usize, Vec<i64>) {
    let rev: Vec<i64> = shift.iter().map(|x| -x).collect();
    let a = (from, to, shift);
    let b = (to, from, rev);
    if b < a {
        b
    } else {
        a
    }
}

impl PeriodicGraph {
    pub fn from_document(doc: &GraphDocument) -> Result<Self> {
        let d = doc.d;
        if !(1..=3).contains(&d) {
            return Err(Error::InvalidGraph(format!("d must be 1, 2 or 3, got {d}")));
        }
        if doc.vertices.is_empty() {
            return Err(Error::InvalidGraph(
                "the fundamental domain is empty".into(),
            ));
        }
        let mut index = BTreeMap::new();
        for (i, v) in doc.vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate vertex `{v}`")));
            }
        }
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::InvalidGraph(format!("unknown vertex `{name}`")))
        };

        let mut seen = BTreeSet::new();
        let mut edges = Vec::with_capacity(doc.edges.len());
        for e in &doc.edges {
            let from = lookup(&e.from)?;
            let to = lookup(&e.to)?;
            if e.shift.len() != d {
                return Err(Error::InvalidGraph(format!(
                    "edge `{}` has a shift of length {}, expected {d}",
                    e.weight,
                    e.shift.len()
                )));
            }
            if from == to && e.shift.iter().all(|&x| x == 0) {
                return Err(Error::InvalidGraph(format!(
                    "edge `{}` is a zero-shift self-loop",
                    e.weight
                )));
            }
            let (f, t, s) = canonical(from, to, e.shift.clone());
            if !seen.insert((f, t, s.clone())) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge `{}` between `{}` and `{}`",
                    e.weight, e.from, e.to
                )));
            }
            edges.push(Edge {
                from: f,
                to: t,
                shift: s,
                weight: e.weight.clone(),
            });
        }

        for k in doc.potentials.keys() {
            lookup(k)?;
        }
        let potentials: Vec<String> = doc
            .vertices
            .iter()
            .map(|v| {
                doc.potentials
                    .get(v)
                    .cloned()
                    .unwrap_or_else(|| format!("V_{v}"))
            })
            .collect();

        let mut symbols = BTreeSet::new();
        for s in edges.iter().map(|e| &e.weight).chain(&potentials) {
            if s.is_empty()
                || !s.chars().all(|c| c.is_alphanumeric() || c == '_')
                || s.starts_with(|c: char| c.is_ascii_digit())
            {
                return Err(Error::InvalidGraph(format!(
                    "`{s}` is not a valid parameter symbol"
                )));
            }
            if is_reserved_name(s) {
                return Err(Error::InvalidGraph(format!(
                    "parameter symbol `{s}` clashes with a variable name"
                )));
            }
            if !symbols.insert(s.clone()) {
                return Err(Error::InvalidGraph(format!(
                    "parameter symbol `{s}` is used twice"
                )));
            }
        }

        Ok(Self {
            d,
            vertices: doc.vertices.clone(),
            edges,
            potentials,
        })
    }

    pub fn to_document(&self) -> GraphDocument {
        GraphDocument {
            d: self.d,
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeSpec {
                    from: self.vertices[e.from].clone(),
                    to: self.vertices[e.to].clone(),
                    shift: e.shift.clone(),
                    weight: e.weight.clone(),
                })
                .collect(),
            potentials: self
                .vertices
                .iter()
                .cloned()
                .zip(self.potentials.iter().cloned())
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn potential(&self, v: usize) -> &str {
        &self.potentials[v]
    }

    pub fn potentials(&self) -> &[String] {
        &self.potentials
    }

    /// All parameter symbols: edge weights, then potentials.
    pub fn symbols(&self) -> Vec<String> {
        self.edges
            .iter()
            .map(|e| e.weight.clone())
            .chain(self.potentials.iter().cloned())
            .collect()
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }
}

/// Parses and validates a JSON graph document.
pub fn parse_graph(text: &str) -> Result<PeriodicGraph> {
    let doc: GraphDocument = serde_json::from_str(text).map_err(|e| {
        // serde_json appends its own position; report it once.
        let full = e.to_string();
        let message = match full.rsplit_once(" at line ") {
            Some((m, _)) => m.to_string(),
            None => full,
        };
        Error::Syntax {
            line: e.line(),
            column: e.column(),
            message,
        }
    })?;
    PeriodicGraph::from_document(&doc)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EdgeLabel {
    Lambda,
    /// Carries `−V(v)`.
    Potential {
        symbol: String,
    },
    /// Carries `weight · z^shift`.
    Hop {
        weight: String,
        shift: Vec<i64>,
    },
}

/// Directed edge `head ← tail` of the quotient graph; its label sits in
/// matrix entry `(head, tail)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct QuotientEdge {
    pub tail: usize,
    pub head: usize,
    pub label: EdgeLabel,
    /// Index of the undirected edge of the periodic graph, for hops.
    pub source: Option<usize>,
}

impl QuotientEdge {
    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }

    /// The label as a one-term Laurent polynomial.
    pub fn weight(&self, d: usize) -> LaurentPoly {
        match &self.label {
            EdgeLabel::Lambda => LaurentPoly::lambda(d),
            EdgeLabel::Potential { symbol } => LaurentPoly::param(d, symbol).neg(),
            EdgeLabel::Hop { weight, shift } => LaurentPoly::hop(weight, shift),
        }
    }

    pub fn label_text(&self, d: usize) -> String {
        match &self.label {
            EdgeLabel::Lambda => "λ".into(),
            EdgeLabel::Potential { symbol } => format!("-{symbol}"),
            EdgeLabel::Hop { .. } => self.weight(d).to_string(),
        }
    }
}

/// The directed labeled multigraph `Γ̂` on the fundamental domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientGraph {
    d: usize,
    vertices: Vec<String>,
    edges: Vec<QuotientEdge>,
}

pub fn build_quotient_graph(g: &PeriodicGraph) -> QuotientGraph {
    let n = g.num_vertices();
    let mut edges = Vec::with_capacity(2 * n + 2 * g.edges().len());
    for v in 0..n {
        edges.push(QuotientEdge {
            tail: v,
            head: v,
            label: EdgeLabel::Lambda,
            source: None,
        });
        edges.push(QuotientEdge {
            tail: v,
            head: v,
            label: EdgeLabel::Potential {
                symbol: g.potential(v).to_string(),
            },
            source: None,
        });
    }
    let mut hops = Vec::new();
    for (k, e) in g.edges().iter().enumerate() {
        let neg: Vec<i64> = e.shift.iter().map(|x| -x).collect();
        hops.push(QuotientEdge {
            tail: e.to,
            head: e.from,
            label: EdgeLabel::Hop {
                weight: e.weight.clone(),
                shift: e.shift.clone(),
            },
            source: Some(k),
        });
        hops.push(QuotientEdge {
            tail: e.from,
            head: e.to,
            label: EdgeLabel::Hop {
                weight: e.weight.clone(),
                shift: neg,
            },
            source: Some(k),
        });
    }
    hops.sort_by(|a, b| {
        let key = |q: &QuotientEdge| match &q.label {
            EdgeLabel::Hop { shift, weight } => (q.tail, q.head, shift.clone(), weight.clone()),
            _ => unreachable!(),
        };
        key(a).cmp(&key(b))
    });
    edges.extend(hops);
    QuotientGraph {
        d: g.dim(),
        vertices: g.vertices().to_vec(),
        edges,
    }
}

impl QuotientGraph {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> &[QuotientEdge] {
        &self.edges
    }

    /// Total degree (in + out, loops counted twice) of vertex `v`.
    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| usize::from(e.tail == v) + usize::from(e.head == v))
            .sum()
    }

    /// The subgraph on the same vertices keeping only the listed edges.
    pub fn edge_subgraph(&self, keep: &BTreeSet<usize>) -> Self {
        Self {
            d: self.d,
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .enumerate()
                .filter(|(i, _)| keep.contains(i))
                .map(|(_, e)| e.clone())
                .collect(),
        }
    }

    /// Entry `(head, tail)` is the sum of the labels of edges `head ← tail`.
    pub fn adjacency_matrix(&self) -> SymbolicMatrix {
        let n = self.num_vertices();
        let mut m = SymbolicMatrix::zeros(n, self.d);
        for e in &self.edges {
            m.add_to(e.head, e.tail, &e.weight(self.d));
        }
        m
    }

    /// Weakly connected components, each sorted, listed by smallest vertex.
    pub fn weak_components(&self) -> Vec<Vec<usize>> {
        let n = self.num_vertices();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nxt = p[y];
                p[y] = r;
                y = nxt;
            }
            r
        }
        for e in &self.edges {
            let a = find(&mut parent, e.tail);
            let b = find(&mut parent, e.head);
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..n {
            let r = find(&mut parent, v);
            comps.entry(r).or_default().push(v);
        }
        comps.into_values().collect()
    }

    /// Graphviz rendering; loops are annotated with `λ` / `-V`.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("digraph \"{name}\" {{\n");
        for v in &self.vertices {
            s.push_str(&format!("  \"{v}\";\n"));
        }
        for e in &self.edges {
            s.push_str(&format!(
                "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
                self.vertices[e.tail],
                self.vertices[e.head],
                e.label_text(self.d)
            ));
        }
        s.push_str("}\n");
        s
    }
}
