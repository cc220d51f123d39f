//! IO, measurement and command-line support around `sketchbox-core`.
//!
//! The core crate is `no_std`; everything that touches files, clocks, threads
//! or the process lives here.

pub mod bench;
pub mod edgelist;
pub mod memory;
pub mod report;
pub mod solve;
pub mod sweep;

pub use edgelist::{load_edge_list, parse_edge_list, save_edge_list, to_edge_list_string, LoadError};
pub use memory::PeakAlloc;
pub use solve::{solve, timed_solve, Algorithm, TimedCover};
pub use sweep::{default_l_max, parallel_sweep};
