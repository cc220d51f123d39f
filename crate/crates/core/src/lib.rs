//! Box covering of graphs in sketch space.
//!
//! The crate computes `b(l)`, the number of radius-`l` boxes needed to cover a
//! graph, without materializing the boxes. Every `l`-neighborhood is replaced by
//! a bottom-k min-hash sketch ([`minhash`]), the sketches are built by rank-ordered
//! message passing ([`boxcover::build_sketches`]) and a greedy set cover runs
//! directly on them ([`setcover`]). The box-count curve is then fitted with a
//! power law and an exponential to decide whether the graph is fractal
//! ([`fractality`]).
//!
//! Synthetic models with known fractality live in [`generators`].
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! timing live in the companion `sketchbox` crate.

#![no_std]
#![warn(missing_debug_implementations, rust_2018_idioms)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod boxcover;
pub mod fractality;
pub mod generators;
pub mod graph;
pub mod minhash;
pub mod seed;
pub mod setcover;

#[cfg(test)]
mod testutil;

pub use boxcover::{
    brute_force_box_cover, build_sketches, explicit_greedy_cover, sketch_box_cover, BoxCoverParams, CoverError,
    CoverResult,
};
pub use fractality::{fit, sweep, BoxCountCurve, FitError, FitReport};
pub use generators::{gen_ba, gen_flower, gen_shm, GeneratorError, ModelSpec};
pub use graph::{coverage_size, Graph, GraphError, Vertex};
pub use minhash::{RankAssignment, Sketch, SketchError};
pub use setcover::{select_greedily_fast, select_greedily_naive, CoverSelection, SketchedFamily};
