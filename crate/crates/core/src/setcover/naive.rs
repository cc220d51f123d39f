use alloc::vec;
use alloc::vec::Vec;

use super::{gain_key, GreedySelector, SketchedFamily};
use crate::minhash::{estimate_from, merge_bottom_k, merged_tail};

/// Re-evaluates `C̃(R ∪ {p})` for every unselected `p` at each step.
#[derive(Debug)]
pub struct NaiveGreedy<'a> {
    fam: &'a SketchedFamily,
    taken: Vec<bool>,
    selected: Vec<u32>,
    sketch_r: Vec<u32>,
    sketch_all: (usize, u32),
    scratch: Vec<u32>,
}

impl<'a> NaiveGreedy<'a> {
    pub fn new(fam: &'a SketchedFamily) -> Self {
        let k = fam.k() as usize;
        let mut all = Vec::new();
        let mut scratch = Vec::new();
        for s in fam.sketches() {
            merge_bottom_k(&all, s.ranks(), k, &mut scratch);
            core::mem::swap(&mut all, &mut scratch);
        }
        NaiveGreedy {
            fam,
            taken: vec![false; fam.len()],
            selected: Vec::new(),
            sketch_r: Vec::new(),
            sketch_all: (all.len(), all.last().copied().unwrap_or(0)),
            scratch,
        }
    }

    /// Current `S̃_R` as ascending rank indices.
    pub fn sketch_r(&self) -> &[u32] {
        &self.sketch_r
    }
}

impl GreedySelector for NaiveGreedy<'_> {
    fn select_next(&mut self) -> Option<u32> {
        let k = self.fam.k();
        let universe = self.fam.universe();
        let mut best: Option<(u64, u32)> = None;
        for (p, s) in self.fam.sketches().iter().enumerate() {
            if self.taken[p] {
                continue;
            }
            let (len, last) = merged_tail(&self.sketch_r, s.ranks(), k as usize);
            let key = (gain_key(k, universe, len, last), p as u32);
            if best.is_none_or(|b| key < b) {
                best = Some(key);
            }
        }
        let (_, p) = best?;
        self.taken[p as usize] = true;
        self.selected.push(p);
        merge_bottom_k(&self.sketch_r, self.fam.sketch(p).ranks(), k as usize, &mut self.scratch);
        core::mem::swap(&mut self.sketch_r, &mut self.scratch);
        Some(p)
    }

    fn estimate(&self) -> f64 {
        estimate_from(
            self.fam.k(),
            self.fam.universe(),
            self.sketch_r.len(),
            self.sketch_r.last().copied().unwrap_or(0),
        )
    }

    fn is_saturated(&self) -> bool {
        (self.sketch_r.len(), self.sketch_r.last().copied().unwrap_or(0)) == self.sketch_all
    }

    fn selected(&self) -> &[u32] {
        &self.selected
    }
}
