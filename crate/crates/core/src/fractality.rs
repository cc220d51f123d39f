//! Box-count curves `b(l)` and the power-law versus exponential fractality test.
//!
//! A curve is fitted twice by least squares on the raw values: `A·l^(−d)` and
//! `B·exp(c·l)`. With `r_fit` the ratio of the power-law residual to the
//! exponential residual, the graph is called fractal iff `−log10 r_fit > 0`.

use alloc::vec::Vec;

use crate::boxcover::{sketch_box_cover, BoxCoverParams, CoverError};
use crate::graph::Graph;
use crate::seed;

/// Box counts measured at one radius.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub l: u32,
    /// `b` of every run, in run order.
    pub runs: Vec<usize>,
    /// Wall-clock seconds for all runs at this radius, when measured.
    pub elapsed_secs: Option<f64>,
}

impl CurvePoint {
    pub fn mean(&self) -> f64 {
        self.runs.iter().sum::<usize>() as f64 / self.runs.len() as f64
    }

    /// Sample standard deviation (0 for a single run).
    pub fn std(&self) -> f64 {
        let k = self.runs.len();
        if k < 2 {
            return 0.0;
        }
        let mean = self.mean();
        let ss: f64 = self.runs.iter().map(|&b| (b as f64 - mean) * (b as f64 - mean)).sum();
        libm::sqrt(ss / (k - 1) as f64)
    }

    /// Coefficient of variation across runs.
    pub fn cv(&self) -> f64 {
        self.std() / self.mean()
    }
}

/// `b(l)` averaged over runs, for increasing `l`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxCountCurve {
    pub points: Vec<CurvePoint>,
    /// Solver template; each run uses `seed = derive(params.seed, [l, run])`.
    pub params: BoxCoverParams,
    /// Replace run means by their running minimum over `l`.
    pub smoothing: bool,
}

impl BoxCountCurve {
    /// Assembles a curve from per-radius run results, truncating after the first
    /// radius at which every run needed a single box.
    pub fn from_runs(params: BoxCoverParams, runs: impl IntoIterator<Item = (u32, Vec<usize>)>) -> Self {
        let mut points = Vec::new();
        for (l, b) in runs {
            let done = b.iter().all(|&x| x <= 1);
            points.push(CurvePoint { l, runs: b, elapsed_secs: None });
            if done {
                break;
            }
        }
        BoxCountCurve { points, params, smoothing: true }
    }

    pub fn radii(&self) -> impl Iterator<Item = u32> + '_ {
        self.points.iter().map(|p| p.l)
    }

    /// Values used for fitting: run means, smoothed when enabled.
    pub fn values(&self) -> Vec<f64> {
        let mut best = f64::INFINITY;
        self.points
            .iter()
            .map(|p| {
                let m = p.mean();
                if self.smoothing {
                    best = best.min(m);
                    best
                } else {
                    m
                }
            })
            .collect()
    }
}

/// Seed of run `run` at radius `l`.
pub fn run_seed(master: u64, l: u32, run: u32) -> u64 {
    seed::derive(master, &[u64::from(l), u64::from(run)])
}

/// `b(l)` of one seeded run.
pub fn run_point(g: &Graph, template: &BoxCoverParams, l: u32, run: u32) -> Result<usize, CoverError> {
    let p = BoxCoverParams { l, seed: run_seed(template.seed, l, run), ..*template };
    Ok(sketch_box_cover(g, &p)?.boxes())
}

/// Measures `b(l)` for `l = 1..=l_max`, `runs` times each, stopping after the
/// first radius where every run needs one box.
pub fn sweep(g: &Graph, template: &BoxCoverParams, l_max: u32, runs: u32) -> Result<BoxCountCurve, CoverError> {
    let mut rows = Vec::new();
    for l in 1..=l_max {
        let b = (0..runs).map(|run| run_point(g, template, l, run)).collect::<Result<Vec<_>, _>>()?;
        let done = b.iter().all(|&x| x <= 1);
        rows.push((l, b));
        if done {
            break;
        }
    }
    Ok(BoxCountCurve::from_runs(*template, rows))
}

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum FitError {
    #[error("too few points: {got} usable, need at least {need}")]
    TooFewPoints { got: usize, need: usize },
    #[error("degenerate curve: all values equal")]
    Degenerate,
    #[error("curve values must be positive and finite")]
    NonPositive,
    #[error("both fits are exact; r_fit is undefined")]
    BothExact,
}

/// Minimum number of points a fit needs.
pub const MIN_FIT_POINTS: usize = 4;

/// Result of fitting a curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitReport {
    /// `(A, d)` of `A·l^(−d)`.
    pub power: (f64, f64),
    /// `(B, c)` of `B·exp(c·l)`.
    pub exponential: (f64, f64),
    pub residual_power: f64,
    pub residual_exp: f64,
    pub r_fit: f64,
    /// `−log10 r_fit`.
    pub score: f64,
    pub fractal: bool,
    pub excluded_prefix: usize,
    pub points_used: usize,
}

/// Fits a curve after dropping its `exclude_prefix` smallest radii (and `l = 0`).
pub fn fit(curve: &BoxCountCurve, exclude_prefix: usize) -> Result<FitReport, FitError> {
    let pts: Vec<(f64, f64)> = curve
        .radii()
        .zip(curve.values())
        .filter(|&(l, _)| l > 0)
        .skip(exclude_prefix)
        .map(|(l, b)| (f64::from(l), b))
        .collect();
    let mut report = fit_points(&pts)?;
    report.excluded_prefix = exclude_prefix;
    Ok(report)
}

/// Fits `(l, b)` pairs with `l > 0`.
pub fn fit_points(pts: &[(f64, f64)]) -> Result<FitReport, FitError> {
    if pts.len() < MIN_FIT_POINTS {
        return Err(FitError::TooFewPoints { got: pts.len(), need: MIN_FIT_POINTS });
    }
    if pts.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite())) {
        return Err(FitError::NonPositive);
    }
    if pts.iter().all(|&(_, y)| y == pts[0].1) {
        return Err(FitError::Degenerate);
    }

    let (ln_a, slope) = linear_fit(pts.iter().map(|&(x, y)| (libm::log(x), libm::log(y))));
    let power = refine(pts, [libm::exp(ln_a), -slope], power_model);
    let (ln_b, rate) = linear_fit(pts.iter().map(|&(x, y)| (x, libm::log(y))));
    let exponential = refine(pts, [libm::exp(ln_b), rate], exp_model);

    let (residual_power, residual_exp) = (power.1, exponential.1);
    if residual_power == 0.0 && residual_exp == 0.0 {
        return Err(FitError::BothExact);
    }
    let r_fit = residual_power / residual_exp;
    let score = -libm::log10(r_fit);
    Ok(FitReport {
        power: (power.0[0], power.0[1]),
        exponential: (exponential.0[0], exponential.0[1]),
        residual_power,
        residual_exp,
        r_fit,
        score,
        fractal: score > 0.0,
        excluded_prefix: 0,
        points_used: pts.len(),
    })
}

/// `A·x^(−d)` and its gradient in `(A, d)`.
fn power_model(x: f64, p: [f64; 2]) -> (f64, [f64; 2]) {
    let base = libm::pow(x, -p[1]);
    let f = p[0] * base;
    (f, [base, -f * libm::log(x)])
}

/// `B·exp(c·x)` and its gradient in `(B, c)`.
fn exp_model(x: f64, p: [f64; 2]) -> (f64, [f64; 2]) {
    let base = libm::exp(p[1] * x);
    let f = p[0] * base;
    (f, [base, f * x])
}

/// Ordinary least squares `y ≈ a + b·x`; returns `(a, b)`.
fn linear_fit(pts: impl Iterator<Item = (f64, f64)> + Clone) -> (f64, f64) {
    let n = pts.clone().count() as f64;
    let (sx, sy) = pts.clone().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let (sxy, sxx) = pts.fold((0.0, 0.0), |(a, b), (x, y)| (a + (x - mx) * (y - my), b + (x - mx) * (x - mx)));
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (my - slope * mx, slope)
}

fn ssr(pts: &[(f64, f64)], p: [f64; 2], model: fn(f64, [f64; 2]) -> (f64, [f64; 2])) -> f64 {
    pts.iter().map(|&(x, y)| (y - model(x, p).0) * (y - model(x, p).0)).sum()
}

const REL_TOL: f64 = 1e-10;
const MAX_ITER: usize = 10_000;

/// Levenberg–Marquardt on the sum of squared residuals; never returns a worse
/// point than `start`.
fn refine(pts: &[(f64, f64)], start: [f64; 2], model: fn(f64, [f64; 2]) -> (f64, [f64; 2])) -> ([f64; 2], f64) {
    let mut p = start;
    let mut cost = ssr(pts, p, model);
    if !cost.is_finite() {
        return (p, cost);
    }
    let mut lambda = 1e-3;
    for _ in 0..MAX_ITER {
        if cost == 0.0 {
            break;
        }
        let (mut jtj, mut jtr) = ([[0.0f64; 2]; 2], [0.0f64; 2]);
        for &(x, y) in pts {
            let (f, g) = model(x, p);
            let r = y - f;
            for i in 0..2 {
                jtr[i] += g[i] * r;
                for j in 0..2 {
                    jtj[i][j] += g[i] * g[j];
                }
            }
        }
        let mut improved = false;
        while lambda < 1e20 {
            let a00 = jtj[0][0] + lambda * jtj[0][0].max(1e-300);
            let a11 = jtj[1][1] + lambda * jtj[1][1].max(1e-300);
            let det = a00 * a11 - jtj[0][1] * jtj[1][0];
            if det == 0.0 || !det.is_finite() {
                lambda *= 10.0;
                continue;
            }
            let step = [(jtr[0] * a11 - jtj[0][1] * jtr[1]) / det, (a00 * jtr[1] - jtj[1][0] * jtr[0]) / det];
            let cand = [p[0] + step[0], p[1] + step[1]];
            let cand_cost = ssr(pts, cand, model);
            if cand_cost.is_finite() && cand_cost < cost {
                let rel = (cost - cand_cost) / cost;
                p = cand;
                cost = cand_cost;
                lambda = (lambda / 10.0).max(1e-12);
                improved = rel >= REL_TOL;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    (p, cost)
}
