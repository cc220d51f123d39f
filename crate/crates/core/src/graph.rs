//! Immutable undirected graphs in compressed adjacency form.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

/// Vertex identifier. Vertices of a graph are exactly `0..n`.
pub type Vertex = u32;

/// Distance value for vertices a BFS did not reach.
pub const UNREACHED: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("edge ({u}, {v}) references a vertex outside 0..{n}")]
    VertexOutOfRange { u: u64, v: u64, n: usize },
    #[error("graph with {0} vertices exceeds the 32-bit vertex id space")]
    TooManyVertices(usize),
}

/// Simple undirected graph with sorted adjacency lists.
///
/// Self-loops and parallel edges are removed at construction; every neighbor
/// list is sorted ascending so that iteration order (and with it every
/// downstream tie-break) is deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<Vertex>,
}

impl Graph {
    /// Builds a graph on `n` vertices. Edge direction is ignored, self-loops
    /// and duplicates are dropped.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        if n >= UNREACHED as usize {
            return Err(GraphError::TooManyVertices(n));
        }
        let mut pairs: Vec<(Vertex, Vertex)> = Vec::new();
        for (u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(GraphError::VertexOutOfRange { u: u.into(), v: v.into(), n });
            }
            if u != v {
                pairs.push((u, v));
                pairs.push((v, u));
            }
        }
        pairs.sort_unstable();
        pairs.dedup();

        let mut offsets = vec![0usize; n + 1];
        for &(u, _) in &pairs {
            offsets[u as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let targets = pairs.into_iter().map(|(_, v)| v).collect();
        Ok(Graph { offsets, targets })
    }

    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        Graph { offsets: vec![0; n + 1], targets: Vec::new() }
    }

    #[inline]
    pub fn num_vertices(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn num_edges(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        let v = v as usize;
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: Vertex) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn max_degree(&self) -> usize {
        (0..self.num_vertices() as Vertex).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Canonical edge sequence: every edge once as `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        (0..self.num_vertices() as Vertex)
            .flat_map(move |u| self.neighbors(u).iter().copied().filter(move |&v| u < v).map(move |v| (u, v)))
    }

    /// Distances from `source`, [`UNREACHED`] where no path exists.
    pub fn bfs_distances(&self, source: Vertex) -> Vec<u32> {
        let mut dist = vec![UNREACHED; self.num_vertices()];
        let mut queue = VecDeque::new();
        dist[source as usize] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize];
            for &w in self.neighbors(u) {
                if dist[w as usize] == UNREACHED {
                    dist[w as usize] = du + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// `N_d(v)`: all vertices within distance `d` of `v`, ascending.
    pub fn neighborhood(&self, v: Vertex, d: u32) -> Vec<Vertex> {
        let mut ball = Vec::new();
        self.visit_ball(v, d, |u| ball.push(u));
        ball.sort_unstable();
        ball
    }

    /// Calls `f` once for every vertex of `N_d(v)`, in BFS order.
    pub fn visit_ball(&self, v: Vertex, d: u32, mut f: impl FnMut(Vertex)) {
        let mut dist = vec![UNREACHED; self.num_vertices()];
        let mut queue = VecDeque::new();
        dist[v as usize] = 0;
        queue.push_back(v);
        while let Some(u) = queue.pop_front() {
            f(u);
            let du = dist[u as usize];
            if du == d {
                continue;
            }
            for &w in self.neighbors(u) {
                if dist[w as usize] == UNREACHED {
                    dist[w as usize] = du + 1;
                    queue.push_back(w);
                }
            }
        }
    }

    /// Largest distance from `v`, or `None` if some vertex is unreachable.
    pub fn eccentricity(&self, v: Vertex) -> Option<u32> {
        let dist = self.bfs_distances(v);
        if dist.contains(&UNREACHED) {
            None
        } else {
            dist.into_iter().max()
        }
    }

    /// Smallest eccentricity over all vertices; `None` if disconnected.
    /// Runs one BFS per vertex.
    pub fn radius(&self) -> Option<u32> {
        (0..self.num_vertices() as Vertex).map(|v| self.eccentricity(v)).min().flatten()
    }
}

/// `|N_l(centers)|` by multi-source BFS truncated at depth `l`.
pub fn coverage_size(g: &Graph, centers: &[Vertex], l: u32) -> usize {
    let mut dist = vec![UNREACHED; g.num_vertices()];
    let mut queue = VecDeque::new();
    for &c in centers {
        if dist[c as usize] != 0 {
            dist[c as usize] = 0;
            queue.push_back(c);
        }
    }
    let mut covered = queue.len();
    while let Some(u) = queue.pop_front() {
        let du = dist[u as usize];
        if du == l {
            continue;
        }
        for &w in g.neighbors(u) {
            if dist[w as usize] == UNREACHED {
                dist[w as usize] = du + 1;
                covered += 1;
                queue.push_back(w);
            }
        }
    }
    covered
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::random_graph;
    use proptest::prelude::*;

    fn path(n: u32) -> Graph {
        Graph::from_edges(n as usize, (0..n - 1).map(|i| (i, i + 1))).unwrap()
    }

    #[test]
    fn triangle_counts() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!((g.num_vertices(), g.num_edges()), (3, 3));
        assert_eq!(g.edges().collect::<Vec<_>>(), [(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn loops_and_duplicates_dropped() {
        let g = Graph::from_edges(2, [(0, 0), (0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(g.num_edges(), 1);
        assert_eq!(g.neighbors(0), &[1]);
        assert_eq!(g.neighbors(1), &[0]);
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(matches!(Graph::from_edges(2, [(0, 2)]), Err(GraphError::VertexOutOfRange { .. })));
    }

    #[test]
    fn neighborhood_small_cases() {
        let g = path(3);
        assert_eq!(g.neighborhood(0, 0), [0]);
        assert_eq!(g.neighborhood(0, 1), [0, 1]);
        assert_eq!(g.neighborhood(1, 1), [0, 1, 2]);
        assert_eq!(g.eccentricity(0), Some(2));
        assert_eq!(g.radius(), Some(1));
    }

    #[test]
    fn coverage_trivial_cases() {
        let g = path(6);
        let all: Vec<Vertex> = (0..6).collect();
        assert_eq!(coverage_size(&g, &all, 0), 6);
        assert_eq!(coverage_size(&g, &all, 3), 6);
        assert_eq!(coverage_size(&g, &[], 2), 0);
        assert_eq!(coverage_size(&g, &[0, 5], 1), 4);
    }

    #[test]
    fn disconnected_graph_has_no_eccentricity() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(g.eccentricity(0), None);
        assert_eq!(g.neighborhood(0, 5), [0, 1]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn graph_is_symmetric_and_simple(n in 1usize..40, p in 0.0f64..0.5, s in any::<u64>()) {
            let g = random_graph(n, p, s);
            let mut deg_sum = 0;
            for u in 0..n as Vertex {
                let nb = g.neighbors(u);
                deg_sum += nb.len();
                prop_assert!(nb.windows(2).all(|w| w[0] < w[1]));
                prop_assert!(!nb.contains(&u));
                for &v in nb {
                    prop_assert!(g.neighbors(v).binary_search(&u).is_ok());
                }
            }
            prop_assert_eq!(deg_sum, 2 * g.num_edges());
        }

        #[test]
        fn neighborhood_matches_bfs_oracle(n in 1usize..300, p in 0.0f64..0.05, s in any::<u64>(), d in 0u32..6) {
            let g = random_graph(n, p, s);
            let v = (s % n as u64) as Vertex;
            let dist = g.bfs_distances(v);
            let expected: Vec<Vertex> =
                (0..n as Vertex).filter(|&u| dist[u as usize] <= d).collect();
            let ball = g.neighborhood(v, d);
            prop_assert_eq!(&ball, &expected);
            prop_assert!(ball.contains(&v));
            let bigger = g.neighborhood(v, d + 1);
            prop_assert!(ball.iter().all(|u| bigger.binary_search(u).is_ok()));
            if let Some(ecc) = g.eccentricity(v) {
                prop_assert_eq!(g.neighborhood(v, ecc).len(), n);
            }
        }

        #[test]
        fn coverage_matches_union_oracle(n in 1usize..120, p in 0.0f64..0.08, s in any::<u64>(), l in 0u32..4, picks in proptest::collection::vec(any::<u32>(), 0..6)) {
            let g = random_graph(n, p, s);
            let centers: Vec<Vertex> = picks.iter().map(|c| c % n as u32).collect();
            let mut union: Vec<Vertex> = centers.iter().flat_map(|&c| g.neighborhood(c, l)).collect();
            union.sort_unstable();
            union.dedup();
            prop_assert_eq!(coverage_size(&g, &centers, l), union.len());
        }
    }
}
