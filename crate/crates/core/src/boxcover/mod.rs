//! Box covering: sketch construction, greedy selection in sketch space, exact
//! coverage bookkeeping and multi-pass execution.
//!
//! [`sketch_box_cover`] runs passes. Each pass builds the sets of
//! `N_l(v) ∩ U` for the still uncovered vertices `U`, exactly while their total
//! size stays within `α·n·k` and as bottom-k sketches after that. Exact sets go
//! to a classical greedy ([`explicit_greedy_cover`]); sketches go to the
//! event-driven greedy of [`crate::setcover`]. Either way the stopping rule is
//! the exact coverage `|N_l(R)| ≥ (1 − ε)·n`, kept by pruned BFS
//! ([`CoverageTracker`]). A pass whose estimate saturates below the target is
//! followed by a fresh pass with new ranks.

mod brute;
mod build;
mod coverage;

use alloc::boxed::Box;
use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::graph::{Graph, Vertex};
use crate::minhash::RankAssignment;
use crate::seed;
use crate::setcover::{EventTally, FastGreedy, GreedySelector, SketchedFamily};

pub use brute::{brute_force_box_cover, BRUTE_FORCE_MAX_N};
pub use build::{build_sketches, build_switching, BuildStats, SketchBuild};
pub use coverage::CoverageTracker;

/// Solver parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxCoverParams {
    /// Box radius.
    pub l: u32,
    /// Sketch capacity.
    pub k: u32,
    /// Exact sets are kept while they hold at most `alpha·n·k` entries.
    pub alpha: f64,
    /// Fraction of vertices allowed to stay uncovered.
    pub eps: f64,
    pub seed: u64,
    /// Passes with fresh ranks before giving up on sketches.
    pub max_passes: u32,
    /// Cover leftover vertices by selecting each as its own center once the
    /// passes are exhausted, instead of failing.
    pub fallback: bool,
}

impl Default for BoxCoverParams {
    fn default() -> Self {
        BoxCoverParams { l: 1, k: 128, alpha: 1.0, eps: 0.0, seed: 0, max_passes: 10, fallback: true }
    }
}

impl BoxCoverParams {
    /// Defaults at radius `l`.
    pub fn with_radius(l: u32) -> Self {
        BoxCoverParams { l, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), CoverError> {
        if self.k < 2 {
            return Err(CoverError::InvalidParams("k must be at least 2"));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(CoverError::InvalidParams("alpha must be positive and finite"));
        }
        if !(0.0..1.0).contains(&self.eps) {
            return Err(CoverError::InvalidParams("eps must lie in [0, 1)"));
        }
        Ok(())
    }

    /// Smallest coverage meeting `covered ≥ (1 − ε)·n`.
    pub fn target(&self, n: usize) -> usize {
        let slack = libm::floor(self.eps * n as f64 + 1e-9) as usize;
        n - slack.min(n)
    }
}

/// What one pass did.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PassTrace {
    /// Seed of the pass's rank assignment.
    pub rank_seed: u64,
    pub build: BuildStats,
    /// Whether the pass ran the exact-set greedy.
    pub exact: bool,
    /// Exact coverage after each selection of the pass.
    pub coverage: Vec<usize>,
    /// Whether the pass ended because the estimate saturated.
    pub saturated: bool,
    /// Sum of event counts over all collections (sketch passes only).
    pub events: EventTally,
    /// Largest per-collection count of type 1, 2-1 and 3 events.
    pub max_collection_events: u32,
}

/// Output of a box cover run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverResult {
    /// Selected centers in order; distinct.
    pub centers: Vec<Vertex>,
    /// Exact `|N_l(centers)|`.
    pub covered: usize,
    /// Coverage required by `eps`.
    pub target: usize,
    pub passes: Vec<PassTrace>,
    /// Centers added by the fallback after the last pass.
    pub fallback_centers: usize,
}

impl CoverResult {
    /// `b(l)`: the number of boxes.
    pub fn boxes(&self) -> usize {
        self.centers.len()
    }

    pub fn is_complete(&self) -> bool {
        self.covered >= self.target
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CoverError {
    #[error("invalid parameters: {0}")]
    InvalidParams(&'static str),
    #[error("coverage target not reached after {} passes ({} of {} covered)", .partial.passes.len(), .partial.covered, .partial.target)]
    PassesExhausted { partial: Box<CoverResult> },
    #[error("brute force refuses n = {n} (max {max})")]
    BruteForceTooLarge { n: usize, max: usize },
    #[error("expected one set per vertex ({expected}), got {got}")]
    SetCountMismatch { expected: usize, got: usize },
}

struct Run<'g> {
    g: &'g Graph,
    tracker: CoverageTracker,
    is_center: Vec<bool>,
    result: CoverResult,
}

impl<'g> Run<'g> {
    fn new(g: &'g Graph, p: &BoxCoverParams) -> Self {
        let n = g.num_vertices();
        Run {
            g,
            tracker: CoverageTracker::new(n, p.l),
            is_center: vec![false; n],
            result: CoverResult {
                centers: Vec::new(),
                covered: 0,
                target: p.target(n),
                passes: Vec::new(),
                fallback_centers: 0,
            },
        }
    }

    fn done(&self) -> bool {
        self.tracker.covered() >= self.result.target
    }

    fn select(&mut self, v: Vertex) -> bool {
        if self.is_center[v as usize] {
            return false;
        }
        self.is_center[v as usize] = true;
        self.result.centers.push(v);
        self.tracker.add_center(self.g, v);
        true
    }

    /// Greedy on exact sets; `to_vertex` maps stored elements to vertices.
    fn exact_greedy(&mut self, sets: &[Vec<u32>], to_vertex: impl Fn(u32) -> Vertex, trace: &mut PassTrace) {
        let gain = |tracker: &CoverageTracker, v: usize| {
            sets[v].iter().filter(|&&e| !tracker.is_covered(to_vertex(e))).count()
        };
        let mut heap: BinaryHeap<(usize, Reverse<Vertex>)> = (0..sets.len())
            .filter(|&v| !self.is_center[v])
            .map(|v| (gain(&self.tracker, v), Reverse(v as Vertex)))
            .filter(|&(c, _)| c > 0)
            .collect();
        while !self.done() {
            let Some((stale, Reverse(v))) = heap.pop() else { break };
            let fresh = gain(&self.tracker, v as usize);
            if fresh < stale {
                if fresh > 0 {
                    heap.push((fresh, Reverse(v)));
                }
                continue;
            }
            self.select(v);
            trace.coverage.push(self.tracker.covered());
        }
    }

    fn sketch_greedy(&mut self, fam: &SketchedFamily, trace: &mut PassTrace) {
        let mut solver = FastGreedy::new(fam);
        while !self.done() {
            if solver.is_saturated() {
                trace.saturated = true;
                break;
            }
            let Some(p) = solver.select_next() else { break };
            if self.select(p) {
                trace.coverage.push(self.tracker.covered());
            }
        }
        for e in solver.events() {
            trace.events.type1 += e.type1;
            trace.events.type2_1 += e.type2_1;
            trace.events.type3 += e.type3;
            trace.events.fill += e.fill;
            trace.max_collection_events = trace.max_collection_events.max(e.bounded());
        }
    }

    fn finish(mut self, fallback: bool) -> Result<CoverResult, CoverError> {
        if !self.done() && fallback {
            for v in 0..self.g.num_vertices() as Vertex {
                if self.done() {
                    break;
                }
                if !self.tracker.is_covered(v) && self.select(v) {
                    self.result.fallback_centers += 1;
                }
            }
        }
        self.result.covered = self.tracker.covered();
        if self.done() {
            Ok(self.result)
        } else {
            Err(CoverError::PassesExhausted { partial: Box::new(self.result) })
        }
    }
}

/// Box cover by greedy selection over sketched neighborhoods.
pub fn sketch_box_cover(g: &Graph, p: &BoxCoverParams) -> Result<CoverResult, CoverError> {
    p.validate()?;
    let n = g.num_vertices();
    let mut run = Run::new(g, p);
    for pass in 0..p.max_passes {
        if run.done() {
            break;
        }
        let rank_seed = seed::derive(p.seed, &[u64::from(pass)]);
        let ranks = RankAssignment::new(n, rank_seed);
        let tracker = &run.tracker;
        let build = build_switching(g, p.l, &ranks, p.k, p.alpha, |v| !tracker.is_covered(v));
        let mut trace = PassTrace {
            rank_seed,
            build: build.stats,
            exact: build.exact,
            coverage: Vec::new(),
            saturated: false,
            events: EventTally::default(),
            max_collection_events: 0,
        };
        if build.exact {
            run.exact_greedy(&build.sets, |r| ranks.item(r), &mut trace);
        } else {
            let sketches = build.into_sketches(p.k);
            let fam = SketchedFamily::new(p.k, n as u32, sketches).expect("sketches share k and universe");
            run.sketch_greedy(&fam, &mut trace);
        }
        run.result.passes.push(trace);
    }
    run.finish(p.fallback)
}

/// Classical greedy box cover over explicit neighborhoods: `sets[v]` lists the
/// vertices of the box centered at `v`. Ties go to the smallest vertex id.
pub fn explicit_greedy_cover(g: &Graph, sets: &[Vec<Vertex>], p: &BoxCoverParams) -> Result<CoverResult, CoverError> {
    p.validate()?;
    if sets.len() != g.num_vertices() {
        return Err(CoverError::SetCountMismatch { expected: g.num_vertices(), got: sets.len() });
    }
    let mut run = Run::new(g, p);
    let mut trace = PassTrace {
        rank_seed: 0,
        build: BuildStats::default(),
        exact: true,
        coverage: Vec::new(),
        saturated: false,
        events: EventTally::default(),
        max_collection_events: 0,
    };
    run.exact_greedy(sets, |v| v, &mut trace);
    run.result.passes.push(trace);
    run.finish(p.fallback)
}

/// Exact radius-`l` neighborhoods of every vertex.
pub fn neighborhoods(g: &Graph, l: u32) -> Vec<Vec<Vertex>> {
    (0..g.num_vertices() as Vertex).map(|v| g.neighborhood(v, l)).collect()
}
