//! Shared inputs for the benchmarks in `benches/`.

use cpdeg_core::graph::{parse_graph, PeriodicGraph};

/// Fixtures exercised by the benchmarks, by file stem.
pub const FIXTURES: [&str; 5] = [
    "hexagonal",
    "singular_house",
    "hex_plus",
    "chain",
    "diatomic_chain",
];

pub fn fixture(name: &str) -> PeriodicGraph {
    let path = format!("{}/../../fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    parse_graph(&text).unwrap_or_else(|e| panic!("{path}: {e}"))
}
