//! Event-driven greedy selection.
//!
//! For an unselected collection `p`, let `M = bottom_k(S̃_R ∪ S̃_p)` and
//! `E_p = S̃_p \ S̃_R`. The state of `p` is
//!
//! * `x = |M ∩ E_p|` and `y = |M ∩ S̃_R|`, so that `x + y = k` when `M` is full;
//! * `ptr`, the prefix length of `S̃_p` ending at `E_p[x]` (the largest element
//!   `p` contributes to `M`);
//! * its kind: **A** when the k-th element of `M` is `E_p[x]`, **B** when it is
//!   `S̃_R[y]`, **U** while `M` is under-full (only possible while `S̃_R` is).
//!
//! Within a kind the gain order needs a single key: A collections are ordered
//! by `E_p[x]`, B collections by `y`, U collections by `k − |E_p|`. A full `M`
//! always beats an under-full one, and across A/B the k-th rank indices are
//! distinct, so the best candidate is found from three queue tops.
//!
//! Each new element of `S̃_R` is processed on its own, in ascending rank order.
//! Collections containing it are reached through an inverted index (type 3).
//! Every position `j` of `S̃_R` whose value changed is then checked against the
//! tree `T(j)`: an A collection sits in `T(y + 1)` and a B collection in `T(y)`,
//! both keyed by `E_p[x]`, and a consistent collection always has a key
//! strictly below `S̃_R[j]`. Retrieving the keys `≥ S̃_R[j]` therefore returns
//! exactly the collections whose k-th element moved (type 1 for A, type 2-1 for
//! B turning into A). B collections whose k-th element merely shifts to a smaller
//! `S̃_R[y]` (type 2-2) keep their key `y` and are never touched. U collections
//! wait in `T(k − |E_p|)` under a key above every rank and fire once `S̃_R`
//! reaches that length.
//!
//! A notified collection leaves its queue and tree and is re-filed once, after
//! all new elements of the selection are in. In between only its counters
//! follow the type-3 events. Every change to `S̃_R` keeps `S̃_R[y] < E_p[x+1]`,
//! so walking `x` down from the stale state reaches the true one. The one
//! exception is an element of `S̃_p` evicted from `S̃_R` while `p` waits; such
//! collections are recomputed from a merge instead.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use super::{GreedySelector, SketchedFamily};
use crate::minhash::{estimate_from, merge_bottom_k};

/// Events a collection was notified of during one greedy run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EventTally {
    /// A collection whose k-th element moved to a smaller value.
    pub type1: u32,
    /// B collection that turned into A.
    pub type2_1: u32,
    /// An element of `S̃_p` entered `S̃_R`.
    pub type3: u32,
    /// The merged sketch became full (at most once per collection).
    pub fill: u32,
}

impl EventTally {
    /// Events covered by the `3k` bound: types 1, 2-1 and 3.
    pub fn bounded(&self) -> u32 {
        self.type1 + self.type2_1 + self.type3
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    A,
    B,
    Under,
    Taken,
}

#[derive(Debug, Clone, Copy)]
struct Slot {
    kind: Kind,
    ptr: u32,
    x: u32,
    y: u32,
    fresh: u32,
    tree: u32,
    tree_key: u32,
    queue_key: u32,
}

const NO_TREE: u32 = 0;
const WAITING: u32 = u32::MAX;

/// Near-linear greedy selector over a [`SketchedFamily`].
#[derive(Debug)]
pub struct FastGreedy<'a> {
    fam: &'a SketchedFamily,
    k: u32,
    sketch_r: Vec<u32>,
    in_r: Vec<bool>,
    sketch_all: (usize, u32),
    slots: Vec<Slot>,
    trees: Vec<BTreeSet<(u32, u32)>>,
    queue_a: BTreeSet<(u32, u32)>,
    queue_b: BTreeSet<(u32, u32)>,
    queue_u: BTreeSet<(u32, u32)>,
    inv_offsets: Vec<usize>,
    inv_entries: Vec<(u32, u32)>,
    selected: Vec<u32>,
    events: Vec<EventTally>,
    merged: Vec<u32>,
    fired: Vec<u32>,
    pending: Vec<u32>,
    is_pending: Vec<bool>,
    dirty: Vec<bool>,
}

impl<'a> FastGreedy<'a> {
    pub fn new(fam: &'a SketchedFamily) -> Self {
        let k = fam.k();
        let universe = fam.universe() as usize;

        let mut inv_offsets = vec![0usize; universe + 1];
        for s in fam.sketches() {
            for &e in s.ranks() {
                inv_offsets[e as usize + 1] += 1;
            }
        }
        for i in 0..universe {
            inv_offsets[i + 1] += inv_offsets[i];
        }
        let mut cursor = inv_offsets.clone();
        let mut inv_entries = vec![(0u32, 0u32); inv_offsets[universe]];
        for (p, s) in fam.sketches().iter().enumerate() {
            for (pos, &e) in s.ranks().iter().enumerate() {
                inv_entries[cursor[e as usize]] = (p as u32, pos as u32);
                cursor[e as usize] += 1;
            }
        }

        let mut all = Vec::new();
        let mut merged = Vec::new();
        for s in fam.sketches() {
            merge_bottom_k(&all, s.ranks(), k as usize, &mut merged);
            core::mem::swap(&mut all, &mut merged);
        }

        let mut solver = FastGreedy {
            fam,
            k,
            sketch_r: Vec::with_capacity(k as usize + 1),
            in_r: vec![false; universe],
            sketch_all: (all.len(), all.last().copied().unwrap_or(0)),
            slots: Vec::with_capacity(fam.len()),
            trees: vec![BTreeSet::new(); k as usize + 1],
            queue_a: BTreeSet::new(),
            queue_b: BTreeSet::new(),
            queue_u: BTreeSet::new(),
            inv_offsets,
            inv_entries,
            selected: Vec::new(),
            events: vec![EventTally::default(); fam.len()],
            merged,
            fired: Vec::new(),
            pending: Vec::new(),
            is_pending: vec![false; fam.len()],
            dirty: vec![false; fam.len()],
        };
        for (p, s) in fam.sketches().iter().enumerate() {
            solver.slots.push(Slot {
                kind: Kind::Under,
                ptr: 0,
                x: 0,
                y: 0,
                fresh: s.len() as u32,
                tree: NO_TREE,
                tree_key: 0,
                queue_key: 0,
            });
            solver.settle(p as u32, false);
            solver.attach(p as u32);
        }
        solver
    }

    /// Per-collection event counts so far.
    pub fn events(&self) -> &[EventTally] {
        &self.events
    }

    pub fn into_events(self) -> Vec<EventTally> {
        self.events
    }

    /// Current `S̃_R` as ascending rank indices.
    pub fn sketch_r(&self) -> &[u32] {
        &self.sketch_r
    }

    #[inline]
    fn entries(&self, p: u32) -> &'a [u32] {
        self.fam.sketch(p).ranks()
    }

    /// Prefix length ending at the last element of `S̃_p[..end]` outside `S̃_R`.
    fn prev_outside_r(&self, p: u32, end: u32) -> u32 {
        let entries = self.entries(p);
        let mut i = end as usize;
        while i > 0 && self.in_r[entries[i - 1] as usize] {
            i -= 1;
        }
        i as u32
    }

    /// Brings the state of `p` in line with the current `S̃_R`.
    ///
    /// `x` never increases and `y` never decreases, so the walk below is
    /// amortized over the lifetime of the collection.
    fn settle(&mut self, p: u32, count_fill: bool) {
        let k = self.k;
        let r_len = self.sketch_r.len() as u32;
        let mut s = self.slots[p as usize];
        if s.kind == Kind::Under {
            if r_len + s.fresh < k {
                self.slots[p as usize] = s;
                return;
            }
            s.x = s.fresh;
            s.y = k - s.x;
            s.ptr = self.prev_outside_r(p, self.entries(p).len() as u32);
            if count_fill {
                self.events[p as usize].fill += 1;
            }
        }
        let entries = self.entries(p);
        while s.x > 0 && s.y < r_len && entries[s.ptr as usize - 1] > self.sketch_r[s.y as usize] {
            s.x -= 1;
            s.y += 1;
            s.ptr = self.prev_outside_r(p, s.ptr - 1);
        }
        s.kind = if s.x == 0 {
            Kind::B
        } else if s.y == 0 || entries[s.ptr as usize - 1] > self.sketch_r[s.y as usize - 1] {
            Kind::A
        } else {
            Kind::B
        };
        self.slots[p as usize] = s;
    }

    fn attach(&mut self, p: u32) {
        let k = self.k;
        let entries = self.entries(p);
        let s = &mut self.slots[p as usize];
        match s.kind {
            Kind::A => {
                s.tree = s.y + 1;
                s.tree_key = entries[s.ptr as usize - 1];
                s.queue_key = s.tree_key;
                self.queue_a.insert((s.queue_key, p));
            }
            Kind::B => {
                if s.x > 0 {
                    s.tree = s.y;
                    s.tree_key = entries[s.ptr as usize - 1];
                } else {
                    s.tree = NO_TREE;
                }
                s.queue_key = s.y;
                self.queue_b.insert((s.queue_key, p));
            }
            Kind::Under => {
                s.tree = k - s.fresh;
                s.tree_key = WAITING;
                s.queue_key = k - s.fresh;
                self.queue_u.insert((s.queue_key, p));
            }
            Kind::Taken => return,
        }
        if s.tree != NO_TREE {
            self.trees[s.tree as usize].insert((s.tree_key, p));
        }
    }

    fn detach(&mut self, p: u32) {
        let s = self.slots[p as usize];
        match s.kind {
            Kind::A => self.queue_a.remove(&(s.queue_key, p)),
            Kind::B => self.queue_b.remove(&(s.queue_key, p)),
            Kind::Under => self.queue_u.remove(&(s.queue_key, p)),
            Kind::Taken => return,
        };
        if s.tree != NO_TREE {
            self.trees[s.tree as usize].remove(&(s.tree_key, p));
        }
    }

    /// Rebuilds `x`, `y` and `ptr` of `p` by merging `S̃_R` and `S̃_p`.
    fn recompute(&mut self, p: u32) {
        let k = self.k as usize;
        let entries = self.entries(p);
        let r = &self.sketch_r;
        let (mut i, mut j, mut x, mut y, mut ptr) = (0, 0, 0u32, 0u32, 0u32);
        while ((x + y) as usize) < k && (i < r.len() || j < entries.len()) {
            if j < entries.len() && self.in_r[entries[j] as usize] {
                j += 1;
            } else if j == entries.len() || (i < r.len() && r[i] < entries[j]) {
                i += 1;
                y += 1;
            } else {
                j += 1;
                x += 1;
                ptr = j as u32;
            }
        }
        let s = &mut self.slots[p as usize];
        if ((x + y) as usize) < k {
            s.kind = Kind::Under;
            s.fresh = entries.iter().filter(|&&e| !self.in_r[e as usize]).count() as u32;
        } else {
            (s.kind, s.x, s.y, s.ptr) = (Kind::B, x, y, ptr);
        }
    }

    /// Takes `p` out of its queue and tree until the end of the selection.
    fn touch(&mut self, p: u32) {
        if !self.is_pending[p as usize] {
            self.detach(p);
            self.is_pending[p as usize] = true;
            self.pending.push(p);
        }
    }

    /// Adds one element to `S̃_R` and notifies affected collections.
    fn insert_element(&mut self, elem: u32) {
        let k = self.k as usize;
        let q = self.sketch_r.partition_point(|&r| r < elem);
        self.sketch_r.insert(q, elem);
        self.in_r[elem as usize] = true;
        if self.sketch_r.len() > k {
            let evicted = self.sketch_r.pop().unwrap();
            self.in_r[evicted as usize] = false;
            let (lo, hi) = (self.inv_offsets[evicted as usize], self.inv_offsets[evicted as usize + 1]);
            for &(p, _) in &self.inv_entries[lo..hi] {
                if self.is_pending[p as usize] {
                    self.dirty[p as usize] = true;
                }
            }
        }

        let (lo, hi) = (self.inv_offsets[elem as usize], self.inv_offsets[elem as usize + 1]);
        for idx in lo..hi {
            let (p, pos) = self.inv_entries[idx];
            if self.slots[p as usize].kind == Kind::Taken {
                continue;
            }
            self.touch(p);
            self.events[p as usize].type3 += 1;
            if self.dirty[p as usize] {
                continue;
            }
            let mut s = self.slots[p as usize];
            match s.kind {
                Kind::Under => s.fresh -= 1,
                _ if pos < s.ptr => {
                    s.x -= 1;
                    s.y += 1;
                    if pos + 1 == s.ptr {
                        s.ptr = self.prev_outside_r(p, pos);
                    }
                }
                _ => {}
            }
            self.slots[p as usize] = s;
        }

        let mut fired = core::mem::take(&mut self.fired);
        for j in q + 1..=self.sketch_r.len() {
            let value = self.sketch_r[j - 1];
            fired.clear();
            fired.extend(self.trees[j].range((value, 0)..).map(|&(_, p)| p));
            for &p in &fired {
                match self.slots[p as usize].kind {
                    Kind::A => self.events[p as usize].type1 += 1,
                    Kind::B => self.events[p as usize].type2_1 += 1,
                    _ => {}
                }
                self.touch(p);
            }
        }
        self.fired = fired;
    }

    /// Checks every tracked quantity against a from-scratch merge.
    #[cfg(test)]
    pub(crate) fn check_invariants(&self) {
        let k = self.k as usize;
        let mut merged = Vec::new();
        for (p, s) in self.slots.iter().enumerate() {
            if s.kind == Kind::Taken {
                continue;
            }
            let entries = self.entries(p as u32);
            merge_bottom_k(&self.sketch_r, entries, k, &mut merged);
            let fresh_in_m = merged.iter().filter(|&&e| !self.in_r[e as usize]).count() as u32;
            let r_in_m = merged.len() as u32 - fresh_in_m;
            if merged.len() < k {
                assert_eq!(s.kind, Kind::Under, "collection {p}");
                let fresh = entries.iter().filter(|&&e| !self.in_r[e as usize]).count() as u32;
                assert_eq!(s.fresh, fresh, "collection {p}");
                continue;
            }
            assert_eq!((s.x, s.y), (fresh_in_m, r_in_m), "collection {p}");
            let kth = merged[k - 1];
            let expect = if self.in_r[kth as usize] { Kind::B } else { Kind::A };
            assert_eq!(s.kind, expect, "collection {p}");
            if s.x > 0 {
                let top = merged.iter().rev().find(|&&e| !self.in_r[e as usize]).unwrap();
                assert_eq!(entries[s.ptr as usize - 1], *top, "collection {p}");
            }
            if s.tree != NO_TREE {
                let bound = self.sketch_r.get(s.tree as usize - 1).copied().unwrap_or(u32::MAX);
                assert!(s.tree_key < bound, "collection {p} would fire spuriously");
            }
        }
    }
}

impl GreedySelector for FastGreedy<'_> {
    fn select_next(&mut self) -> Option<u32> {
        let best_a = self.queue_a.first().copied();
        let best_b = self.queue_b.first().map(|&(y, p)| (self.sketch_r[y as usize - 1], p));
        let choice = match (best_a, best_b) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let p = match choice {
            Some((_, p)) => p,
            None => self.queue_u.first()?.1,
        };

        self.detach(p);
        self.slots[p as usize].kind = Kind::Taken;
        self.selected.push(p);

        let mut merged = core::mem::take(&mut self.merged);
        merge_bottom_k(&self.sketch_r, self.entries(p), self.k as usize, &mut merged);
        merged.retain(|&e| !self.in_r[e as usize]);
        for &e in &merged {
            self.insert_element(e);
        }
        self.merged = merged;
        let pending = core::mem::take(&mut self.pending);
        for &q in &pending {
            self.is_pending[q as usize] = false;
            if core::mem::take(&mut self.dirty[q as usize]) {
                self.recompute(q);
            }
            self.settle(q, true);
            self.attach(q);
        }
        self.pending = pending;
        self.pending.clear();
        Some(p)
    }

    fn estimate(&self) -> f64 {
        estimate_from(self.k, self.fam.universe(), self.sketch_r.len(), self.sketch_r.last().copied().unwrap_or(0))
    }

    fn is_saturated(&self) -> bool {
        (self.sketch_r.len(), self.sketch_r.last().copied().unwrap_or(0)) == self.sketch_all
    }

    fn selected(&self) -> &[u32] {
        &self.selected
    }
}
