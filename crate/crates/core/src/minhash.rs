//! Bottom-k min-hash sketches.
//!
//! Items get distinct ranks from a seeded random permutation: item `v` holds
//! rank index `π(v)` and real rank `(π(v) + 1) / (n + 1)`. All comparisons use
//! the integer rank index; the real value is only materialized for the threshold
//! rank and the cardinality estimate.
//!
//! A [`Sketch`] stores the rank indices of its (at most `k`) items in ascending
//! order. The item behind a rank index is recovered with
//! [`RankAssignment::item`].

use alloc::vec::Vec;
use core::cmp::Ordering;

use rand::seq::SliceRandom;

use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum SketchError {
    #[error("sketch capacities differ ({left} vs {right})")]
    CapacityMismatch { left: u32, right: u32 },
    #[error("sketches were built over different rank universes ({left} vs {right})")]
    UniverseMismatch { left: u32, right: u32 },
    #[error("threshold rank of an empty sketch is undefined")]
    Empty,
}

/// Seeded bijection between items `0..n` and rank indices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankAssignment {
    seed: u64,
    rank_of: Vec<u32>,
    item_of: Vec<u32>,
}

impl RankAssignment {
    /// Draws a uniform random permutation of `0..n` from `seed`.
    pub fn new(n: usize, seed: u64) -> Self {
        assert!(n < u32::MAX as usize, "rank universe exceeds u32");
        let mut item_of: Vec<u32> = (0..n as u32).collect();
        item_of.shuffle(&mut seed::rng(seed));
        let mut rank_of = alloc::vec![0u32; n];
        for (r, &v) in item_of.iter().enumerate() {
            rank_of[v as usize] = r as u32;
        }
        RankAssignment { seed, rank_of, item_of }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.rank_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank_of.is_empty()
    }

    /// Rank index of `item`.
    #[inline]
    pub fn rank(&self, item: u32) -> u32 {
        self.rank_of[item as usize]
    }

    /// Item holding rank index `rank`.
    #[inline]
    pub fn item(&self, rank: u32) -> u32 {
        self.item_of[rank as usize]
    }

    /// Real-valued rank of `item`, in `(0, 1)`.
    pub fn value(&self, item: u32) -> f64 {
        rank_value(self.rank(item), self.len() as u32)
    }

    /// Items in increasing rank order.
    pub fn items_by_rank(&self) -> &[u32] {
        &self.item_of
    }
}

/// Real rank of rank index `rank` in a universe of `universe` items.
#[inline]
pub fn rank_value(rank: u32, universe: u32) -> f64 {
    (f64::from(rank) + 1.0) / (f64::from(universe) + 1.0)
}

/// `C̃ = (k − 1) / τ` for a sketch with `len` entries whose largest rank index is
/// `last`. An empty sketch estimates 0.
#[inline]
pub fn estimate_from(k: u32, universe: u32, len: usize, last: u32) -> f64 {
    if len == 0 {
        0.0
    } else if len >= k as usize {
        f64::from(k - 1) / rank_value(last, universe)
    } else {
        len as f64
    }
}

/// Bottom-k min-hash sketch: the (at most) `k` smallest rank indices of a set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sketch {
    k: u32,
    universe: u32,
    ranks: Vec<u32>,
}

impl Sketch {
    /// Empty sketch with capacity `k` over a universe of `universe` ranks.
    ///
    /// Panics if `k < 2` (the estimator `(k − 1) / τ` needs `k ≥ 2`).
    pub fn empty(k: u32, universe: u32) -> Self {
        assert!(k >= 2, "sketch capacity must be at least 2");
        Sketch { k, universe, ranks: Vec::new() }
    }

    /// Sketch of the set whose rank indices are given (any order, duplicates allowed).
    pub fn from_ranks(k: u32, universe: u32, ranks: impl IntoIterator<Item = u32>) -> Self {
        let mut s = Sketch::empty(k, universe);
        s.ranks.extend(ranks);
        s.ranks.sort_unstable();
        s.ranks.dedup();
        s.ranks.truncate(k as usize);
        s
    }

    /// Sketch of a set of items under `ranks`.
    pub fn from_items(ranks: &RankAssignment, k: u32, items: impl IntoIterator<Item = u32>) -> Self {
        Self::from_ranks(k, ranks.len() as u32, items.into_iter().map(|i| ranks.rank(i)))
    }

    /// Wraps an already sorted, deduplicated, truncated rank list.
    pub(crate) fn from_sorted_unchecked(k: u32, universe: u32, ranks: Vec<u32>) -> Self {
        debug_assert!(ranks.len() <= k as usize);
        debug_assert!(ranks.windows(2).all(|w| w[0] < w[1]));
        Sketch { k, universe, ranks }
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }

    #[inline]
    pub fn universe(&self) -> u32 {
        self.universe
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    #[inline]
    pub fn is_full(&self) -> bool {
        self.ranks.len() == self.k as usize
    }

    /// Rank indices, ascending.
    #[inline]
    pub fn ranks(&self) -> &[u32] {
        &self.ranks
    }

    /// `(rank value, item)` pairs in ascending rank order.
    pub fn entries<'a>(&'a self, ranks: &'a RankAssignment) -> impl Iterator<Item = (f64, u32)> + 'a {
        self.ranks.iter().map(move |&r| (rank_value(r, self.universe), ranks.item(r)))
    }

    pub fn contains_rank(&self, rank: u32) -> bool {
        self.ranks.binary_search(&rank).is_ok()
    }

    /// Adds one rank index, keeping the bottom k. Returns whether the sketch changed.
    pub fn insert(&mut self, rank: u32) -> bool {
        match self.ranks.binary_search(&rank) {
            Ok(_) => false,
            Err(pos) if pos >= self.k as usize => false,
            Err(pos) => {
                if self.is_full() {
                    self.ranks.pop();
                }
                self.ranks.insert(pos, rank);
                true
            }
        }
    }

    /// Bottom-k sketch of the union of the two underlying sets, in one linear pass.
    pub fn merge_and_purify(&self, other: &Sketch) -> Result<Sketch, SketchError> {
        self.check_compatible(other)?;
        let mut out = Vec::with_capacity(self.k as usize);
        merge_bottom_k(&self.ranks, &other.ranks, self.k as usize, &mut out);
        Ok(Sketch { k: self.k, universe: self.universe, ranks: out })
    }

    fn check_compatible(&self, other: &Sketch) -> Result<(), SketchError> {
        if self.k != other.k {
            return Err(SketchError::CapacityMismatch { left: self.k, right: other.k });
        }
        if self.universe != other.universe {
            return Err(SketchError::UniverseMismatch { left: self.universe, right: other.universe });
        }
        Ok(())
    }

    /// `τ`: the k-th smallest rank when full, `(k − 1) / |S|` otherwise.
    pub fn threshold_rank(&self) -> Result<f64, SketchError> {
        match self.ranks.last() {
            None => Err(SketchError::Empty),
            Some(&last) if self.is_full() => Ok(rank_value(last, self.universe)),
            Some(_) => Ok(f64::from(self.k - 1) / self.len() as f64),
        }
    }

    /// `C̃ = (k − 1) / τ`, which is exactly `|S|` for an under-full sketch.
    pub fn estimate_cardinality(&self) -> Result<f64, SketchError> {
        if self.is_empty() {
            return Err(SketchError::Empty);
        }
        Ok(self.estimate_or_zero())
    }

    /// Like [`Sketch::estimate_cardinality`] but 0 for the empty set.
    pub fn estimate_or_zero(&self) -> f64 {
        estimate_from(self.k, self.universe, self.len(), self.ranks.last().copied().unwrap_or(0))
    }
}

/// Writes the k smallest distinct values of two ascending lists into `out`.
pub(crate) fn merge_bottom_k(a: &[u32], b: &[u32], k: usize, out: &mut Vec<u32>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while out.len() < k {
        let next = match (a.get(i), b.get(j)) {
            (None, None) => break,
            (Some(&x), None) => {
                i += 1;
                x
            }
            (None, Some(&y)) => {
                j += 1;
                y
            }
            (Some(&x), Some(&y)) => match x.cmp(&y) {
                Ordering::Less => {
                    i += 1;
                    x
                }
                Ordering::Greater => {
                    j += 1;
                    y
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                    x
                }
            },
        };
        out.push(next);
    }
}

/// Size and largest element of `bottom_k(a ∪ b)` without materializing it.
pub(crate) fn merged_tail(a: &[u32], b: &[u32], k: usize) -> (usize, u32) {
    let (mut i, mut j, mut len, mut last) = (0, 0, 0, 0);
    while len < k {
        last = match (a.get(i), b.get(j)) {
            (None, None) => break,
            (Some(&x), None) => {
                i += 1;
                x
            }
            (None, Some(&y)) => {
                j += 1;
                y
            }
            (Some(&x), Some(&y)) => {
                if x <= y {
                    i += 1;
                }
                if y <= x {
                    j += 1;
                }
                x.min(y)
            }
        };
        len += 1;
    }
    (len, last)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;
    use rand::Rng;

    fn sketch(k: u32, ranks: &[u32]) -> Sketch {
        Sketch::from_ranks(k, 100, ranks.iter().copied())
    }

    #[test]
    fn single_item_rank_is_half() {
        let r = RankAssignment::new(1, 99);
        assert_eq!(r.value(0), 0.5);
    }

    #[test]
    fn ranks_are_deterministic_bijection() {
        let a = RankAssignment::new(500, 3);
        assert_eq!(a, RankAssignment::new(500, 3));
        assert_ne!(a, RankAssignment::new(500, 4));
        let mut seen = vec![false; 500];
        for v in 0..500 {
            let r = a.rank(v);
            assert!(!seen[r as usize]);
            seen[r as usize] = true;
            assert_eq!(a.item(r), v);
        }
    }

    #[test]
    fn rank_values_look_uniform() {
        // One-sample Kolmogorov–Smirnov distance against U(0, 1).
        let n = 10_000;
        let a = RankAssignment::new(n, 11);
        let mut values: Vec<f64> = (0..n as u32).map(|v| a.value(v)).collect();
        values.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let ks = values
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let lo = (x - i as f64 / n as f64).abs();
                let hi = ((i + 1) as f64 / n as f64 - x).abs();
                lo.max(hi)
            })
            .fold(0.0, f64::max);
        assert!(ks < 0.05, "KS statistic {ks}");
        assert!(values.iter().all(|&x| x > 0.0 && x < 1.0));
    }

    #[test]
    fn threshold_rank_cases() {
        // k = 4, ranks 0.1..0.4: universe 9 gives (r + 1) / 10.
        let full = Sketch::from_ranks(4, 9, [0, 1, 2, 3]);
        assert!((full.threshold_rank().unwrap() - 0.4).abs() < 1e-12);
        assert!((full.estimate_cardinality().unwrap() - 7.5).abs() < 1e-12);
        let under = Sketch::from_ranks(4, 9, [0, 1]);
        assert_eq!(under.threshold_rank().unwrap(), 1.5);
        assert_eq!(under.estimate_cardinality().unwrap(), 2.0);
        assert_eq!(Sketch::empty(4, 9).threshold_rank(), Err(SketchError::Empty));
        assert_eq!(Sketch::empty(4, 9).estimate_or_zero(), 0.0);
    }

    #[test]
    fn merge_identity_and_idempotence() {
        let s = sketch(4, &[3, 9, 12, 40, 41]);
        assert_eq!(s.ranks(), &[3, 9, 12, 40]);
        let empty = Sketch::empty(4, 100);
        assert_eq!(s.merge_and_purify(&empty).unwrap(), s);
        assert_eq!(s.merge_and_purify(&s).unwrap(), s);
    }

    #[test]
    fn merge_rejects_mismatch() {
        let a = Sketch::empty(4, 100);
        assert_eq!(
            a.merge_and_purify(&Sketch::empty(5, 100)),
            Err(SketchError::CapacityMismatch { left: 4, right: 5 })
        );
        assert!(matches!(a.merge_and_purify(&Sketch::empty(4, 50)), Err(SketchError::UniverseMismatch { .. })));
    }

    #[test]
    fn insert_keeps_bottom_k() {
        let mut s = sketch(3, &[5, 7]);
        assert!(s.insert(9));
        assert!(!s.insert(9));
        assert!(!s.insert(11));
        assert!(s.insert(1));
        assert_eq!(s.ranks(), &[1, 5, 7]);
    }

    #[test]
    fn estimator_statistics_over_seeds() {
        let n = 10_000usize;
        let k = 128u32;
        let trials = 1000;
        let mut estimates = Vec::with_capacity(trials);
        for t in 0..trials {
            let ranks = RankAssignment::new(4 * n, seed::derive(0xe57, &[t as u64]));
            let s = Sketch::from_items(&ranks, k, 0..n as u32);
            estimates.push(s.estimate_cardinality().unwrap());
        }
        let mean = estimates.iter().sum::<f64>() / trials as f64;
        let var = estimates.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (trials - 1) as f64;
        let sd = var.sqrt();
        let se = sd / (trials as f64).sqrt();
        assert!((mean - n as f64).abs() <= 3.0 * se, "mean {mean}, se {se}");
        assert!(sd / mean <= 1.2 / f64::from(k - 2).sqrt(), "cv {}", sd / mean);
    }

    #[test]
    fn relative_error_tail_is_rare_at_corollary_k() {
        // k >= (2 + c) eps^-2 ln |X| with c = 1.5, eps = 0.25 on |X| = 2000.
        let n = 2000usize;
        let eps = 0.25f64;
        let k = ((3.5 / (eps * eps)) * (n as f64).ln()).ceil() as u32;
        let mut rng = seed::rng(5);
        let trials = 200;
        let mut bad = 0;
        for t in 0..trials {
            let ranks = RankAssignment::new(n, seed::derive(91, &[t]));
            let size = rng.gen_range(1..=n);
            let s = Sketch::from_items(&ranks, k, 0..size as u32);
            let rel = (s.estimate_cardinality().unwrap() - size as f64).abs() / size as f64;
            if rel > eps {
                bad += 1;
            }
        }
        // Bound is 1 / |X|^c, far below one failure in 200 trials.
        assert_eq!(bad, 0);
    }

    fn arb_set() -> impl Strategy<Value = Vec<u32>> {
        proptest::collection::vec(0u32..100, 0..40)
    }

    proptest! {
        #[test]
        fn merge_equals_sketch_of_union(a in arb_set(), b in arb_set(), k in 2u32..12) {
            let sa = sketch(k, &a);
            let sb = sketch(k, &b);
            let direct = sketch(k, &[a.clone(), b.clone()].concat());
            let merged = sa.merge_and_purify(&sb).unwrap();
            prop_assert_eq!(&merged, &direct);
            prop_assert_eq!(merged_tail(sa.ranks(), sb.ranks(), k as usize),
                (direct.len(), direct.ranks().last().copied().unwrap_or(0)));
        }

        #[test]
        fn merge_commutative_associative(a in arb_set(), b in arb_set(), c in arb_set(), k in 2u32..12) {
            let (sa, sb, sc) = (sketch(k, &a), sketch(k, &b), sketch(k, &c));
            prop_assert_eq!(sa.merge_and_purify(&sb).unwrap(), sb.merge_and_purify(&sa).unwrap());
            let left = sa.merge_and_purify(&sb).unwrap().merge_and_purify(&sc).unwrap();
            let right = sa.merge_and_purify(&sb.merge_and_purify(&sc).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn threshold_is_kth_order_statistic(a in proptest::collection::vec(0u32..100, 1..60), k in 2u32..12) {
            let s = sketch(k, &a);
            let mut all = a.clone();
            all.sort_unstable();
            all.dedup();
            let tau = s.threshold_rank().unwrap();
            if all.len() >= k as usize {
                prop_assert_eq!(tau, rank_value(all[k as usize - 1], 100));
            } else {
                prop_assert_eq!(s.estimate_cardinality().unwrap(), all.len() as f64);
            }
        }

        #[test]
        fn merging_never_raises_full_threshold(a in arb_set(), b in arb_set(), k in 2u32..8) {
            let (sa, sb) = (sketch(k, &a), sketch(k, &b));
            let m = sa.merge_and_purify(&sb).unwrap();
            if sa.is_full() && m.is_full() {
                prop_assert!(m.threshold_rank().unwrap() <= sa.threshold_rank().unwrap());
            }
        }
    }
}
