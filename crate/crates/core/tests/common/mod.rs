#![allow(dead_code)]

use qlext_core::gen::{gen_random, DeletionPolicy, RandomGenConfig};
use qlext_core::{Instance, InstanceBuilder};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Direct sampler: random H drawn greedily page by page, plus random new
/// vertices and new edges. Produces a good share of unsolvable instances.
pub fn sampled_instance(seed: u64, max_vertices: usize, max_pages: usize, max_kappa: usize) -> Instance {
    sample(seed, max_vertices, max_pages, max_kappa, None)
}

/// Like `sampled_instance` with exactly two new vertices.
pub fn sampled_pair_instance(seed: u64, max_vertices: usize, max_pages: usize, max_kappa: usize) -> Instance {
    sample(seed, max_vertices, max_pages, max_kappa, Some(2))
}

fn sample(seed: u64, max_vertices: usize, max_pages: usize, max_kappa: usize, new_fixed: Option<usize>) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let n = rng.gen_range(new_fixed.unwrap_or(0).max(2)..=max_vertices);
        let new_count = new_fixed.unwrap_or_else(|| rng.gen_range(0..=n.min(3)));
        let old_count = n - new_count;
        let ell = rng.gen_range(1..=max_pages);
        let old: Vec<String> = (0..old_count).map(|i| format!("o{i}")).collect();
        let new: Vec<String> = (0..new_count).map(|i| format!("n{i}")).collect();
        let mut builder = InstanceBuilder::new(ell)
            .old_vertices(old.iter())
            .new_vertices(new.iter());
        // Old edges, each on a random page that keeps H valid.
        let mut placed: Vec<(usize, usize, usize)> = Vec::new();
        let density = rng.gen_range(0.2..0.9);
        for a in 0..old_count {
            for b in a + 1..old_count {
                if !rng.gen_bool(density) {
                    continue;
                }
                let mut pages: Vec<usize> = (0..ell).collect();
                pages.shuffle(&mut rng);
                let nests = |p: usize, placed: &[(usize, usize, usize)]| {
                    placed
                        .iter()
                        .any(|&(x, y, q)| q == p && ((x < a && b < y) || (a < x && y < b)))
                };
                if let Some(&p) = pages.iter().find(|&&p| !nests(p, &placed)) {
                    placed.push((a, b, p));
                }
            }
        }
        let mut kappa = new_count;
        let mut candidates: Vec<(String, String)> = Vec::new();
        let all: Vec<String> = old.iter().chain(new.iter()).cloned().collect();
        for i in 0..n {
            for j in i + 1..n {
                let both_old = i < old_count && j < old_count;
                if both_old && placed.iter().any(|&(x, y, _)| (x, y) == (i, j)) {
                    continue;
                }
                candidates.push((all[i].clone(), all[j].clone()));
            }
        }
        candidates.shuffle(&mut rng);
        let budget = max_kappa.saturating_sub(kappa);
        let take = rng.gen_range(0..=budget.min(candidates.len()));
        for (a, b) in candidates.into_iter().take(take) {
            builder = builder.new_edge(&a, &b);
            kappa += 1;
        }
        if kappa > max_kappa {
            continue;
        }
        for (a, b, p) in placed {
            builder = builder.old_edge(&old[a], &old[b], p);
        }
        return builder.build().expect("sampler builds valid instances");
    }
}

/// Instances from the library generator with a known-solvable hint.
pub fn generated_instance(seed: u64) -> Option<(Instance, bool)> {
    let cfg = RandomGenConfig {
        vertex_count: 4 + (seed % 4) as usize,
        edge_probability: 0.4 + (seed % 5) as f64 * 0.1,
        page_count: 1 + (seed % 7 / 4) as usize,
        deletion: DeletionPolicy {
            vertices: 1 + (seed % 3) as usize,
            edges: (seed / 3 % 3) as usize,
        },
        scramble_h: seed % 2 == 1,
        seed,
    };
    let out = gen_random(&cfg).ok()?;
    (out.instance.kappa() <= 6).then_some((out.instance, out.known_solvable))
}
