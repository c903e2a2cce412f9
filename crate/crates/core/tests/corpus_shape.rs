mod common;

#[test]
fn corpus_covers_both_dimensions_and_sizes() {
    let graphs = common::corpus(20240601);
    let mut seen = std::collections::BTreeSet::new();
    for an in &graphs {
        seen.insert((an.dim(), an.graph.num_vertices()));
    }
    assert!(seen.len() >= 5, "{seen:?}");
}
