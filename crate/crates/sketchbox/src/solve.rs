//! One entry point for the three box-covering algorithms.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use sketchbox_core::boxcover::neighborhoods;
use sketchbox_core::{
    brute_force_box_cover, coverage_size, explicit_greedy_cover, sketch_box_cover, BoxCoverParams, CoverError,
    CoverResult, Graph,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Algorithm {
    /// Sketch-based greedy with the α-switch and multi-pass execution.
    #[default]
    Sketch,
    /// Classical lazy greedy over explicitly materialized balls.
    ExactGreedy,
    /// Exhaustive minimum cover; small graphs only.
    Brute,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Sketch, Algorithm::ExactGreedy, Algorithm::Brute];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Sketch => "sketch",
            Algorithm::ExactGreedy => "exact-greedy",
            Algorithm::Brute => "brute",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Algorithm::ALL.into_iter().find(|a| a.name() == s).ok_or_else(|| format!("unknown algorithm `{s}`"))
    }
}

/// Covers `g` with radius-`p.l` boxes.
///
/// The exact greedy and brute force always reach full coverage; `eps` only
/// affects the sketch algorithm.
pub fn solve(g: &Graph, algorithm: Algorithm, p: &BoxCoverParams) -> Result<CoverResult, CoverError> {
    match algorithm {
        Algorithm::Sketch => sketch_box_cover(g, p),
        Algorithm::ExactGreedy => {
            p.validate()?;
            explicit_greedy_cover(g, &neighborhoods(g, p.l), p)
        }
        Algorithm::Brute => {
            let centers = brute_force_box_cover(g, p.l)?;
            let covered = coverage_size(g, &centers, p.l);
            Ok(CoverResult { centers, covered, target: g.num_vertices(), passes: Vec::new(), fallback_centers: 0 })
        }
    }
}

#[derive(Debug, Clone)]
pub struct TimedCover {
    pub result: CoverResult,
    pub elapsed: Duration,
}

/// [`solve`] with wall-clock timing.
pub fn timed_solve(g: &Graph, algorithm: Algorithm, p: &BoxCoverParams) -> Result<TimedCover, CoverError> {
    let start = Instant::now();
    let result = solve(g, algorithm, p)?;
    Ok(TimedCover { result, elapsed: start.elapsed() })
}
