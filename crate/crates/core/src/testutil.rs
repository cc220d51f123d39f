use alloc::vec::Vec;
use rand::Rng;

use crate::graph::{Graph, Vertex};
use crate::seed;

/// Erdős–Rényi graph `G(n, p)`.
pub(crate) fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = seed::rng(seed);
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
