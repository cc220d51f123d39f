#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use sketchbox_core::minhash::RankAssignment;
use sketchbox_core::seed;
use sketchbox_core::setcover::SketchedFamily;
use sketchbox_core::{build_sketches, Graph, Sketch, Vertex};

/// Erdős–Rényi graph with expected degree `avg_degree`.
pub fn random_graph(n: usize, avg_degree: f64, seed: u64) -> Graph {
    let mut rng = seed::rng(seed);
    let p = (avg_degree / n.max(2) as f64).min(1.0);
    let mut edges = Vec::new();
    for u in 0..n as Vertex {
        for v in u + 1..n as Vertex {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// The `index`-th graph of a seeded mix of sizes and densities, `n ≤ n_max`.
pub fn graph_case(index: u64, n_max: usize) -> Graph {
    let mut rng = seed::rng(seed::derive(0xca5e, &[index]));
    let n = rng.gen_range(1..=n_max);
    let degree = rng.gen_range(0.5..6.0);
    random_graph(n, degree, rng.gen())
}

/// Sketched family number `index`: either random subsets of `0..n` or the
/// radius-`l` balls of a random graph, with `k ∈ {4, 8, 16}`.
pub fn family_case(index: u64) -> SketchedFamily {
    let mut rng = seed::rng(seed::derive(0xfa17, &[index]));
    let k = [4u32, 8, 16][rng.gen_range(0..3)];
    let n = rng.gen_range(8..=256usize);
    let ranks = RankAssignment::new(n, rng.gen());
    let sketches: Vec<Sketch> = if index.is_multiple_of(2) {
        let sets = rng.gen_range(1..=n);
        (0..sets)
            .map(|_| {
                let size = rng.gen_range(0..=(3 * k as usize).min(n));
                let mut items: Vec<u32> = (0..n as u32).collect();
                Sketch::from_items(&ranks, k, items.partial_shuffle(&mut rng, size).0.iter().copied())
            })
            .collect()
    } else {
        let g = random_graph(n, rng.gen_range(1.0..4.0), rng.gen());
        build_sketches(&g, rng.gen_range(1..=3), &ranks, k, |_| true)
    };
    SketchedFamily::new(k, n as u32, sketches).unwrap()
}
