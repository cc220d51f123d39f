//! Wall time and peak memory of single solver runs.

use std::fmt::Write as _;

use sketchbox_core::{BoxCoverParams, CoverError, Graph};

use crate::memory::{peak_rss_bytes, reset_peak_rss, PeakAlloc};
use crate::solve::{timed_solve, Algorithm};

/// Column header of the bench TSV.
pub const BENCH_HEADER: &str = "# instance\tn\tm\tl\tboxes\tseconds\tpeak_heap_bytes\tpeak_rss_bytes";

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub l: u32,
    pub boxes: usize,
    pub seconds: f64,
    /// Peak live heap during the run, graph included; needs an installed [`PeakAlloc`].
    pub peak_heap_bytes: Option<usize>,
    /// Peak resident set size during the run, when the kernel lets us reset it.
    pub peak_rss_bytes: Option<u64>,
}

impl BenchRow {
    pub fn to_tsv(&self) -> String {
        let opt = |x: Option<u64>| x.map_or_else(|| "NA".to_string(), |v| v.to_string());
        format!(
            "{}\t{}\t{}\t{}\t{}\t{:.6}\t{}\t{}",
            self.instance,
            self.n,
            self.m,
            self.l,
            self.boxes,
            self.seconds,
            opt(self.peak_heap_bytes.map(|b| b as u64)),
            opt(self.peak_rss_bytes)
        )
    }
}

/// Runs the solver once on `g` and measures it.
pub fn bench_one(
    instance: &str,
    g: &Graph,
    algorithm: Algorithm,
    p: &BoxCoverParams,
    heap: Option<&PeakAlloc>,
) -> Result<BenchRow, CoverError> {
    let heap = heap.filter(|h| h.is_active());
    if let Some(h) = heap {
        h.reset_peak();
    }
    let rss_ok = reset_peak_rss();
    let run = timed_solve(g, algorithm, p)?;
    Ok(BenchRow {
        instance: instance.to_string(),
        n: g.num_vertices(),
        m: g.num_edges(),
        l: p.l,
        boxes: run.result.boxes(),
        seconds: run.elapsed.as_secs_f64(),
        peak_heap_bytes: heap.map(PeakAlloc::peak),
        peak_rss_bytes: if rss_ok { peak_rss_bytes() } else { None },
    })
}

/// Header plus one line per row.
pub fn format_bench_tsv(rows: &[BenchRow]) -> String {
    let mut s = String::from(BENCH_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(s, "{}", r.to_tsv());
    }
    s
}
