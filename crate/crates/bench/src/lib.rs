//! Instance families shared by the criterion benches.

use qlext_core::gen::{gen_random, reduce_mcc, DeletionPolicy, MccInstance, RandomGenConfig};
use qlext_core::{Instance, Result};

/// A solvable random instance with `removed` new vertices. Seeds whose graph
/// does not fit in `pages` are skipped, so the result depends only on the inputs.
pub fn random_workload(seed: u64, vertices: usize, edge_probability: f64, pages: usize, removed: usize) -> Instance {
    (seed..seed + 1000)
        .find_map(|s| {
            gen_random(&RandomGenConfig {
                vertex_count: vertices,
                edge_probability,
                page_count: pages,
                deletion: DeletionPolicy { vertices: removed, edges: 1 },
                scramble_h: false,
                seed: s,
            })
            .ok()
        })
        .map(|g| g.instance)
        .expect("no seed in range fits the requested pages")
}

/// Reduction of the complete `k`-partite graph with `per_color` vertices per
/// class, so every choice of one vertex per color is a clique.
pub fn clique_workload(k: usize, per_color: usize, simple: bool) -> Result<Instance> {
    let n = k * per_color;
    let names = (0..n).map(|v| format!("v{v}")).collect();
    let color = (0..n).map(|v| v / per_color + 1).collect();
    let edges = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|&(a, b)| a / per_color != b / per_color)
        .collect();
    let mcc = MccInstance::new(names, edges, k, color)?;
    Ok(reduce_mcc(&mcc, simple)?.instance)
}
