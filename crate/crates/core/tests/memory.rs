use rgg_pursuit::rgg::{Rgg, RggParams};

fn bytes_per_vertex(n: usize, r: f64) -> f64 {
    let g = Rgg::generate(RggParams {
        n,
        r,
        d: 2,
        seed: 11,
    })
    .unwrap();
    g.heap_bytes() as f64 / n as f64
}

/// Average degree grows by 16× between the two radii; storage per vertex
/// must not follow it.
#[test]
fn storage_is_independent_of_degree() {
    let sparse = bytes_per_vertex(50_000, 0.02);
    let dense = bytes_per_vertex(50_000, 0.08);
    assert!(dense <= 1.5 * sparse, "{sparse} vs {dense}");
}

#[test]
fn storage_grows_linearly() {
    let small = bytes_per_vertex(20_000, 0.05);
    let large = bytes_per_vertex(160_000, 0.05);
    assert!(large <= 1.5 * small, "{small} vs {large}");
}
