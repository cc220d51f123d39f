//! Rank-ordered message passing that builds the sketch of every `N_l(v)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{Graph, Vertex};
use crate::minhash::{RankAssignment, Sketch};

/// Work counters of one build.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildStats {
    /// Rounds that ran (at most `l`; fewer when nothing changed).
    pub rounds: u32,
    /// Adjacency entries scanned while forwarding elements.
    pub edges_traversed: u64,
    /// Insertion attempts.
    pub trials: u64,
    /// Successful insertions.
    pub insertions: u64,
    /// Round after which the sets were purified to `k` (0 if never).
    pub purified_after: u32,
}

/// Per-vertex element sets produced by a build.
#[derive(Debug, Clone)]
pub struct SketchBuild {
    /// For every vertex, ascending rank indices of the stored elements.
    pub sets: Vec<Vec<u32>>,
    /// `true` when no purification happened: every set is the full `N_l(v)`
    /// restricted to active elements.
    pub exact: bool,
    pub stats: BuildStats,
}

impl SketchBuild {
    /// Wraps the sets as sketches of capacity `k`.
    pub fn into_sketches(self, k: u32) -> Vec<Sketch> {
        let universe = self.sets.len() as u32;
        self.sets
            .into_iter()
            .map(|mut s| {
                s.truncate(k as usize);
                Sketch::from_sorted_unchecked(k, universe, s)
            })
            .collect()
    }
}

/// Builds the bottom-k sketch of `N_l(v) ∩ active` for every vertex `v`.
///
/// Inactive vertices hold no element of their own but still relay the elements
/// of others.
pub fn build_sketches(
    g: &Graph,
    l: u32,
    ranks: &RankAssignment,
    k: u32,
    active: impl Fn(Vertex) -> bool,
) -> Vec<Sketch> {
    Builder::new(g, ranks, &active).run(l, k, None).into_sketches(k)
}

/// Builds exact sets until they hold more than `alpha·n·k` entries in total,
/// then purifies to `k` and finishes as [`build_sketches`].
pub fn build_switching(
    g: &Graph,
    l: u32,
    ranks: &RankAssignment,
    k: u32,
    alpha: f64,
    active: impl Fn(Vertex) -> bool,
) -> SketchBuild {
    let budget = alpha * g.num_vertices() as f64 * f64::from(k);
    Builder::new(g, ranks, &active).run(l, k, Some(budget))
}

struct Builder<'a> {
    g: &'a Graph,
    ranks: &'a RankAssignment,
    sets: Vec<Vec<u32>>,
    /// Sources in increasing rank with the offsets of their frontier lists.
    sources: Vec<u32>,
    frontier_offsets: Vec<usize>,
    frontier: Vec<Vertex>,
    /// `sets[w][k-1]` once `sets[w]` is full in sketch mode, else `u32::MAX`;
    /// kept apart so that most rejections never touch the set.
    bound: Vec<u32>,
    stamp: Vec<u32>,
    clock: u32,
    stats: BuildStats,
}

impl<'a> Builder<'a> {
    fn new(g: &'a Graph, ranks: &'a RankAssignment, active: &dyn Fn(Vertex) -> bool) -> Self {
        let n = g.num_vertices();
        let mut sets = vec![Vec::new(); n];
        let mut sources = Vec::new();
        let mut frontier_offsets = vec![0];
        let mut frontier = Vec::new();
        for (rank, &v) in ranks.items_by_rank().iter().enumerate() {
            if active(v) {
                sets[v as usize].push(rank as u32);
                sources.push(rank as u32);
                frontier.push(v);
                frontier_offsets.push(frontier.len());
            }
        }
        Builder {
            g,
            ranks,
            sets,
            sources,
            frontier_offsets,
            frontier,
            bound: vec![u32::MAX; n],
            stamp: vec![0; n],
            clock: 0,
            stats: BuildStats::default(),
        }
    }

    /// `budget = None` runs in sketch mode from the start.
    fn run(mut self, l: u32, k: u32, budget: Option<f64>) -> SketchBuild {
        let k = k as usize;
        let mut exact = budget.is_some();
        if !exact {
            self.purify(k);
        }
        for round in 1..=l {
            if self.sources.is_empty() {
                break;
            }
            self.stats.rounds = round;
            let added = if exact { self.exact_round() } else { self.sketch_round(k) };
            if added == 0 {
                break;
            }
            if exact {
                let total: usize = self.sets.iter().map(Vec::len).sum();
                if budget.is_some_and(|b| total as f64 > b) {
                    exact = false;
                    self.stats.purified_after = round;
                    self.purify(k);
                }
            }
        }
        SketchBuild { sets: self.sets, exact, stats: self.stats }
    }

    /// Truncates every set to `k` and drops frontier entries that did not survive.
    fn purify(&mut self, k: usize) {
        for (s, b) in self.sets.iter_mut().zip(&mut self.bound) {
            s.truncate(k);
            s.shrink_to(k);
            if s.len() == k {
                *b = s[k - 1];
            }
        }
        let mut sources = Vec::with_capacity(self.sources.len());
        let mut offsets = vec![0];
        let mut write = 0;
        for (i, &src) in self.sources.iter().enumerate() {
            for idx in self.frontier_offsets[i]..self.frontier_offsets[i + 1] {
                let w = self.frontier[idx];
                let set = &self.sets[w as usize];
                if set.len() < k || src <= set[k - 1] {
                    self.frontier[write] = w;
                    write += 1;
                }
            }
            if write > *offsets.last().unwrap() {
                sources.push(src);
                offsets.push(write);
            }
        }
        self.frontier.truncate(write);
        self.sources = sources;
        self.frontier_offsets = offsets;
    }

    /// Calls `try_insert(src, w)` once for every distinct `w ∈ N(A_src)` and
    /// records the accepted targets as the next frontier.
    fn propagate(&mut self, mut try_insert: impl FnMut(&mut [Vec<u32>], &mut [u32], u32, Vertex) -> bool) -> usize {
        let mut next_sources = Vec::new();
        let mut next_offsets = vec![0];
        let mut next_frontier = Vec::new();
        for (i, &src) in self.sources.iter().enumerate() {
            if self.clock == u32::MAX {
                self.stamp.fill(0);
                self.clock = 0;
            }
            self.clock += 1;
            let item = self.ranks.item(src);
            self.stamp[item as usize] = self.clock;
            for idx in self.frontier_offsets[i]..self.frontier_offsets[i + 1] {
                let u = self.frontier[idx];
                let nbrs = self.g.neighbors(u);
                self.stats.edges_traversed += nbrs.len() as u64;
                for &w in nbrs {
                    if self.stamp[w as usize] == self.clock {
                        continue;
                    }
                    self.stamp[w as usize] = self.clock;
                    self.stats.trials += 1;
                    if src < self.bound[w as usize] && try_insert(&mut self.sets, &mut self.bound, src, w) {
                        next_frontier.push(w);
                    }
                }
            }
            if next_frontier.len() > *next_offsets.last().unwrap() {
                next_sources.push(src);
                next_offsets.push(next_frontier.len());
            }
        }
        let added = next_frontier.len();
        self.stats.insertions += added as u64;
        self.sources = next_sources;
        self.frontier_offsets = next_offsets;
        self.frontier = next_frontier;
        added
    }

    fn sketch_round(&mut self, k: usize) -> usize {
        self.propagate(|sets, bound, src, w| {
            let set = &mut sets[w as usize];
            match set.binary_search(&src) {
                Ok(_) => false,
                Err(pos) => {
                    set.insert(pos, src);
                    set.truncate(k);
                    if set.len() == k {
                        bound[w as usize] = set[k - 1];
                    }
                    true
                }
            }
        })
    }

    /// Membership is checked against the sets of the previous round; accepted
    /// elements are merged in once the round is over.
    fn exact_round(&mut self) -> usize {
        let added = self.propagate(|sets, _, src, w| sets[w as usize].binary_search(&src).is_err());
        let n = self.sets.len();
        let mut offsets = vec![0usize; n + 1];
        for &w in &self.frontier {
            offsets[w as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut bucket = vec![0u32; self.frontier.len()];
        for (i, &src) in self.sources.iter().enumerate() {
            for idx in self.frontier_offsets[i]..self.frontier_offsets[i + 1] {
                let w = self.frontier[idx] as usize;
                bucket[cursor[w]] = src;
                cursor[w] += 1;
            }
        }
        let mut merged = Vec::new();
        for w in 0..n {
            let extra = &bucket[offsets[w]..offsets[w + 1]];
            if extra.is_empty() {
                continue;
            }
            let old = &self.sets[w];
            merged.clear();
            merged.reserve(old.len() + extra.len());
            let (mut i, mut j) = (0, 0);
            while i < old.len() && j < extra.len() {
                if old[i] < extra[j] {
                    merged.push(old[i]);
                    i += 1;
                } else {
                    merged.push(extra[j]);
                    j += 1;
                }
            }
            merged.extend_from_slice(&old[i..]);
            merged.extend_from_slice(&extra[j..]);
            self.sets[w].clone_from(&merged);
        }
        added
    }
}
