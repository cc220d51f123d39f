//! `(1 − ε)`-set cover with sketched input.
//!
//! Both solvers pick, at every step, the collection `p` maximizing
//! `C̃(R ∪ {p})`, breaking ties by the smallest collection id, and stop once
//! `R = P` or `C̃(R) ≥ (1 − ε/2)·n`, or once `C̃(R) = C̃(P)` since no further
//! selection can change the estimate. [`NaiveGreedy`] re-evaluates every
//! collection per step; [`FastGreedy`] maintains the evaluation incrementally
//! through rank-keyed trees and only touches a collection when its gain can
//! have changed. The two produce identical ordered selections.
//!
//! Both are exposed as step-wise selectors ([`GreedySelector`]) so that callers
//! with their own stopping rule (the box cover driver uses exact coverage) can
//! drive them.

mod fast;
mod naive;

use alloc::vec::Vec;

use crate::minhash::{Sketch, SketchError};

pub use fast::{EventTally, FastGreedy};
pub use naive::NaiveGreedy;

/// Sketches `S̃_p` of a set family over one rank assignment and one `k`.
#[derive(Debug, Clone)]
pub struct SketchedFamily {
    k: u32,
    universe: u32,
    sketches: Vec<Sketch>,
}

impl SketchedFamily {
    /// Validates that all sketches share `k` and the rank universe.
    ///
    /// The universe size doubles as the element count `n` of the stopping rule.
    pub fn new(k: u32, universe: u32, sketches: Vec<Sketch>) -> Result<Self, SketchError> {
        for s in &sketches {
            if s.k() != k {
                return Err(SketchError::CapacityMismatch { left: k, right: s.k() });
            }
            if s.universe() != universe {
                return Err(SketchError::UniverseMismatch { left: universe, right: s.universe() });
            }
        }
        Ok(SketchedFamily { k, universe, sketches })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn universe(&self) -> u32 {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.sketches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sketches.is_empty()
    }

    pub fn sketches(&self) -> &[Sketch] {
        &self.sketches
    }

    pub fn sketch(&self, p: u32) -> &Sketch {
        &self.sketches[p as usize]
    }
}

/// Ordered selection produced by a greedy run.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverSelection {
    /// Selected collections in selection order.
    pub selected: Vec<u32>,
    /// `C̃(R)` after each selection.
    pub estimates: Vec<f64>,
    /// Per-collection event counts (fast solver only).
    pub events: Option<Vec<EventTally>>,
}

/// Comparable evaluation of `C̃(R ∪ {p})`: smaller is a larger estimate.
///
/// A full merged sketch is keyed by its k-th rank index; an under-full one by
/// `universe + (k − |merged|)`, which sorts after every full sketch and orders
/// under-full sketches by decreasing size.
#[inline]
pub(crate) fn gain_key(k: u32, universe: u32, merged_len: usize, merged_last: u32) -> u64 {
    if merged_len >= k as usize {
        u64::from(merged_last)
    } else {
        u64::from(universe) + (k as usize - merged_len) as u64
    }
}

/// A greedy selector that can be advanced one collection at a time.
pub trait GreedySelector {
    /// Selects the next collection, or `None` once every collection is taken.
    fn select_next(&mut self) -> Option<u32>;
    /// `C̃(R)` of the current selection (0 when nothing is selected).
    fn estimate(&self) -> f64;
    /// Whether `C̃(R) = C̃(P)`: no further selection can change the estimate.
    fn is_saturated(&self) -> bool;
    fn selected(&self) -> &[u32];
}

fn run_to_threshold<G: GreedySelector>(solver: &mut G, fam: &SketchedFamily, eps: f64) -> Vec<f64> {
    let target = (1.0 - eps / 2.0) * f64::from(fam.universe());
    let mut trace = Vec::new();
    while solver.selected().len() < fam.len() && solver.estimate() < target && !solver.is_saturated() {
        if solver.select_next().is_none() {
            break;
        }
        trace.push(solver.estimate());
    }
    trace
}

/// Greedy selection by full re-evaluation each step, `O(n²k)`.
pub fn select_greedily_naive(fam: &SketchedFamily, eps: f64) -> CoverSelection {
    let mut solver = NaiveGreedy::new(fam);
    let estimates = run_to_threshold(&mut solver, fam, eps);
    CoverSelection { selected: solver.selected().to_vec(), estimates, events: None }
}

/// Event-driven greedy selection, `O(nk log n)`; same output as the naive solver.
pub fn select_greedily_fast(fam: &SketchedFamily, eps: f64) -> CoverSelection {
    let mut solver = FastGreedy::new(fam);
    let estimates = run_to_threshold(&mut solver, fam, eps);
    let selected = solver.selected().to_vec();
    CoverSelection { selected, estimates, events: Some(solver.into_events()) }
}
