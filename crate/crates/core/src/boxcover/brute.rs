//! Exhaustive minimum box cover for tiny graphs.

use alloc::vec::Vec;

use super::CoverError;
use crate::graph::{Graph, Vertex};

/// Largest graph accepted by [`brute_force_box_cover`].
pub const BRUTE_FORCE_MAX_N: usize = 25;

/// A provably minimum set of centers whose radius-`l` balls cover `g`.
///
/// Iterative deepening over the cover size; each level branches on the balls
/// containing the lowest uncovered vertex, with balls contained in another ball
/// removed up front.
pub fn brute_force_box_cover(g: &Graph, l: u32) -> Result<Vec<Vertex>, CoverError> {
    let n = g.num_vertices();
    if n > BRUTE_FORCE_MAX_N {
        return Err(CoverError::BruteForceTooLarge { n, max: BRUTE_FORCE_MAX_N });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let balls: Vec<u32> =
        (0..n as Vertex).map(|v| g.neighborhood(v, l).iter().fold(0u32, |m, &u| m | (1 << u))).collect();
    let mut useful: Vec<(Vertex, u32)> = Vec::new();
    for (v, &b) in balls.iter().enumerate() {
        let dominated = balls.iter().enumerate().any(|(u, &c)| u != v && b & c == b && (b != c || u < v));
        if !dominated {
            useful.push((v as Vertex, b));
        }
    }
    let full = (1u32 << n) - 1;
    let mut chosen = Vec::new();
    for size in 1..=n {
        if search(&useful, full, 0, size, &mut chosen) {
            return Ok(chosen);
        }
    }
    unreachable!("every vertex covers itself")
}

fn search(balls: &[(Vertex, u32)], full: u32, covered: u32, budget: usize, chosen: &mut Vec<Vertex>) -> bool {
    if covered == full {
        return true;
    }
    if budget == 0 {
        return false;
    }
    let target = (!covered & full).trailing_zeros();
    for &(v, b) in balls {
        if b & (1 << target) == 0 {
            continue;
        }
        chosen.push(v);
        if search(balls, full, covered | b, budget - 1, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}
