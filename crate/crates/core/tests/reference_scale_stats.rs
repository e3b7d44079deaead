//! Statistical spot checks at the scale of the reference experiments:
//! isolated-vertex counts after cleanup, degree-distribution shape, and the
//! intra-community edge ratio of the modular generator.

use maxcut_mbo::generators::{erdos_renyi, modular};
use maxcut_mbo::graph::degree_distribution;

#[test]
fn sparse_er_cleanup_vertex_counts() {
    // G(5000, 0.001): the expected isolated count is ~5000 exp(-5) ~ 34, so
    // the cleaned vertex count concentrates in the mid-4960s
    for seed in [1u64, 2] {
        let g = erdos_renyi::<f64>(5000, 0.001, seed);
        let (clean, _) = g.remove_isolated_nodes().unwrap();
        let n = clean.vertex_count();
        assert!(
            (4930..=4995).contains(&n),
            "seed {seed}: cleaned count {n} out of the expected band"
        );
        assert_eq!(clean.edge_count(), g.edge_count());
    }
}

#[test]
fn dense_er_degrees_concentrate() {
    // G(2500, 0.4): mean degree ~1000, roughly normal; essentially all mass
    // inside +-10%
    let g = erdos_renyi::<f64>(2500, 0.4, 7);
    let dist = degree_distribution(&g).unwrap();
    let total: f64 = dist.values().sum();
    assert!((total - 1.0).abs() < 1e-12);
    let near: f64 = dist
        .iter()
        .filter(|(&j, _)| (900..=1100).contains(&(j as usize)))
        .map(|(_, &p)| p)
        .sum();
    assert!(near > 0.999, "only {near} of the mass near the mean degree");
    let mean: f64 = dist.iter().map(|(&j, &p)| j as f64 * p).sum();
    assert!((mean - 0.4 * 2499.0).abs() < 5.0, "mean degree {mean}");
}

#[test]
fn modular_ratio_at_reference_scale() {
    // R(2500, 2, 0.009, 0.8): a single realization already pins the
    // intra-community edge fraction near 0.8
    let m = modular::<f64>(2500, 2, 0.009, 0.8, 3);
    let mut intra = 0usize;
    let mut total = 0usize;
    for (i, j, _) in m.graph.undirected_edges() {
        total += 1;
        if m.communities[i] == m.communities[j] {
            intra += 1;
        }
    }
    let frac = intra as f64 / total as f64;
    assert!((frac - 0.8).abs() < 0.01, "intra fraction {frac}");
    let expected = 0.009 * 2500.0 * 2499.0 / 2.0;
    assert!(
        (total as f64 - expected).abs() < 0.05 * expected,
        "edge count {total} vs expected {expected}"
    );
}
