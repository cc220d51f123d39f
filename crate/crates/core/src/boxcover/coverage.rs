//! Exact coverage `|N_l(R)|` maintained by pruned BFS over a distance array.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{Graph, Vertex, UNREACHED};

/// `delta[u]` is the distance from `u` to the nearest selected center, or
/// [`UNREACHED`] when it exceeds `l`.
#[derive(Debug, Clone)]
pub struct CoverageTracker {
    l: u32,
    delta: Vec<u32>,
    covered: usize,
    queue: VecDeque<(Vertex, u32)>,
}

impl CoverageTracker {
    pub fn new(n: usize, l: u32) -> Self {
        CoverageTracker { l, delta: vec![UNREACHED; n], covered: 0, queue: VecDeque::new() }
    }

    pub fn covered(&self) -> usize {
        self.covered
    }

    pub fn is_covered(&self, v: Vertex) -> bool {
        self.delta[v as usize] != UNREACHED
    }

    pub fn distances(&self) -> &[u32] {
        &self.delta
    }

    /// Adds center `v`; returns how many vertices became covered.
    pub fn add_center(&mut self, g: &Graph, v: Vertex) -> usize {
        self.add_center_with(g, v, |_| {})
    }

    /// As [`add_center`](Self::add_center), reporting every newly covered vertex.
    pub fn add_center_with(&mut self, g: &Graph, v: Vertex, mut newly: impl FnMut(Vertex)) -> usize {
        let before = self.covered;
        if self.delta[v as usize] == 0 {
            return 0;
        }
        self.relax(v, 0, &mut newly);
        self.queue.push_back((v, 0));
        while let Some((u, d)) = self.queue.pop_front() {
            if d == self.l {
                continue;
            }
            for &w in g.neighbors(u) {
                if self.delta[w as usize] > d + 1 {
                    self.relax(w, d + 1, &mut newly);
                    self.queue.push_back((w, d + 1));
                }
            }
        }
        self.covered - before
    }

    #[inline]
    fn relax(&mut self, u: Vertex, d: u32, newly: &mut impl FnMut(Vertex)) {
        if self.delta[u as usize] == UNREACHED {
            self.covered += 1;
            newly(u);
        }
        self.delta[u as usize] = d;
    }
}
