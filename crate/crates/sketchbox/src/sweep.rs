//! Box-count sweeps on a thread pool.

use std::time::Instant;

use rayon::prelude::*;
use sketchbox_core::fractality::{run_seed, BoxCountCurve, CurvePoint};
use sketchbox_core::graph::UNREACHED;
use sketchbox_core::{BoxCoverParams, CoverError, Graph};

use crate::solve::{solve, Algorithm};

/// Same curve as `sketchbox_core::sweep` for the sketch algorithm, with the
/// runs of each radius spread over `threads` workers and per-radius timing.
///
/// Every run uses the seed derived from `(template.seed, l, run)`, so the curve
/// does not depend on `threads`.
pub fn parallel_sweep(
    g: &Graph,
    algorithm: Algorithm,
    template: &BoxCoverParams,
    l_max: u32,
    runs: u32,
    threads: usize,
) -> Result<BoxCountCurve, CoverError> {
    let one = |l: u32, run: u32| {
        let p = BoxCoverParams { l, seed: run_seed(template.seed, l, run), ..*template };
        solve(g, algorithm, &p).map(|r| r.boxes())
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build().expect("thread pool");
    let mut points = Vec::new();
    for l in 1..=l_max {
        let start = Instant::now();
        let b: Vec<usize> = if threads <= 1 {
            (0..runs).map(|run| one(l, run)).collect::<Result<_, _>>()?
        } else {
            pool.install(|| (0..runs).into_par_iter().map(|run| one(l, run)).collect::<Result<_, _>>())?
        };
        let done = b.iter().all(|&x| x <= 1);
        points.push(CurvePoint { l, runs: b, elapsed_secs: Some(start.elapsed().as_secs_f64()) });
        if done {
            break;
        }
    }
    Ok(BoxCountCurve { points, params: *template, smoothing: true })
}

/// Radius at which every component fits in one box around its first vertex:
/// the largest such eccentricity. Past it `b(l)` equals the component count, so
/// a sweep of a disconnected graph can stop there.
pub fn default_l_max(g: &Graph) -> u32 {
    let mut seen = vec![false; g.num_vertices()];
    let mut best = 1;
    for v in 0..g.num_vertices() {
        if seen[v] {
            continue;
        }
        let dist = g.bfs_distances(v as u32);
        let mut ecc = 0;
        for (u, &d) in dist.iter().enumerate() {
            if d != UNREACHED {
                seen[u] = true;
                ecc = ecc.max(d);
            }
        }
        best = best.max(ecc);
    }
    best
}
