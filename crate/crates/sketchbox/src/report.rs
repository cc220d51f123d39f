//! Text formats: box-count curve TSV and the flat fit report.
//!
//! Curve TSV: `#`-prefixed metadata lines, the header
//! `# l<TAB>b_mean<TAB>b_std<TAB>runs`, then one row per radius. `b_mean` is the
//! value the fit uses (the running minimum when smoothing is on); `b_std` is
//! the spread of the raw runs.

use std::fmt::Write as _;
use std::io::{self, BufRead, Write};

use sketchbox_core::fractality::{BoxCountCurve, FitReport};

/// Column header of the curve TSV.
pub const CURVE_HEADER: &str = "# l\tb_mean\tb_std\truns";

/// Writes `curve` after the given `key: value` metadata lines.
pub fn write_curve_tsv(curve: &BoxCountCurve, meta: &[(String, String)], mut w: impl Write) -> io::Result<()> {
    for (k, v) in meta {
        writeln!(w, "# {k}: {v}")?;
    }
    writeln!(w, "# smoothing: {}", if curve.smoothing { "running-minimum" } else { "none" })?;
    writeln!(w, "{CURVE_HEADER}")?;
    for (p, b) in curve.points.iter().zip(curve.values()) {
        writeln!(w, "{}\t{}\t{}\t{}", p.l, b, p.std(), p.runs.len())?;
    }
    Ok(())
}

/// One parsed curve row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveRow {
    pub l: u32,
    pub b_mean: f64,
    pub b_std: f64,
    pub runs: u32,
}

#[derive(Debug, thiserror::Error)]
pub enum CurveParseError {
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Reads the rows of a curve TSV, skipping `#` lines.
pub fn read_curve_tsv(reader: impl BufRead) -> Result<Vec<CurveRow>, CurveParseError> {
    let mut rows = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let bad = |msg: &str| CurveParseError::Parse { line: idx + 1, msg: msg.into() };
        let cols: Vec<&str> = text.split('\t').collect();
        if cols.len() != 4 {
            return Err(bad("expected 4 tab-separated columns"));
        }
        rows.push(CurveRow {
            l: cols[0].parse().map_err(|_| bad("bad l"))?,
            b_mean: cols[1].parse().map_err(|_| bad("bad b_mean"))?,
            b_std: cols[2].parse().map_err(|_| bad("bad b_std"))?,
            runs: cols[3].parse().map_err(|_| bad("bad runs"))?,
        });
    }
    Ok(rows)
}

/// Flat `key=value` rendering of a fit, one pair per line.
pub fn format_fit_report(r: &FitReport) -> String {
    let mut s = String::new();
    let pairs: [(&str, String); 11] = [
        ("power_amplitude", r.power.0.to_string()),
        ("power_exponent_d", r.power.1.to_string()),
        ("exp_amplitude", r.exponential.0.to_string()),
        ("exp_rate_c", r.exponential.1.to_string()),
        ("residual_power", r.residual_power.to_string()),
        ("residual_exp", r.residual_exp.to_string()),
        ("r_fit", r.r_fit.to_string()),
        ("score", r.score.to_string()),
        ("verdict", if r.fractal { "fractal" } else { "non-fractal" }.to_string()),
        ("excluded_prefix", r.excluded_prefix.to_string()),
        ("points_used", r.points_used.to_string()),
    ];
    for (k, v) in pairs {
        let _ = writeln!(s, "{k}={v}");
    }
    s
}
