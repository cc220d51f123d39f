//! Every sketch built by message passing equals the bottom-k sketch of the BFS
//! ball it summarizes.

mod common;

use sketchbox_core::boxcover::build_switching;
use sketchbox_core::minhash::RankAssignment;
use sketchbox_core::{build_sketches, Sketch};

#[test]
fn sketches_match_bfs_balls_on_50_graphs() {
    for case in 0..50u64 {
        let g = common::graph_case(case, 300);
        let n = g.num_vertices();
        let ranks = RankAssignment::new(n, case ^ 0x5eed);
        for l in 1..=3 {
            for k in [4u32, 32] {
                let built = build_sketches(&g, l, &ranks, k, |_| true);
                for v in 0..n as u32 {
                    let direct = Sketch::from_items(&ranks, k, g.neighborhood(v, l));
                    assert_eq!(built[v as usize], direct, "case {case} l {l} k {k} v {v}");
                }
            }
        }
    }
}

#[test]
fn alpha_switch_does_not_change_the_sketches() {
    for case in 0..20u64 {
        let g = common::graph_case(case, 200);
        let ranks = RankAssignment::new(g.num_vertices(), case);
        for l in 1..=3 {
            let pure = build_sketches(&g, l, &ranks, 8, |_| true);
            for alpha in [0.1, 1.0, 1e9] {
                let switched = build_switching(&g, l, &ranks, 8, alpha, |_| true).into_sketches(8);
                assert_eq!(switched, pure, "case {case} l {l} alpha {alpha}");
            }
        }
    }
}
