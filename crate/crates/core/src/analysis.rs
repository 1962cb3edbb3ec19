//! Diagnostics over trajectories: extinction times, the zero set inside
//! the damping region, decay-rate fits, comparison checks and the
//! feedback-control scenario.

use crate::config::{InitialDatum, RunConfig};
use crate::damping::Interval;
use crate::error::{Error, Result};
use crate::flux::FluxModel;
use crate::grid::{Grid1D, RealField, Topology};
use crate::hyperbolic::{run_conservation, EXTINCTION_THRESHOLD};
use crate::io::TimeSeries;
use crate::record::RunRecord;

/// First time after which the series stays below `threshold` until its end.
pub fn detect_extinction(series: &TimeSeries, threshold: f64) -> Option<f64> {
    let mut first = None;
    for (t, v) in series.iter() {
        if v < threshold {
            if first.is_none() {
                first = Some(t);
            }
        } else {
            first = None;
        }
    }
    first
}

/// Indices of the values whose points lie in the open `interval`, ordered
/// along it (wrapping on periodic grids).
pub fn interval_cells(grid: &Grid1D, interval: Interval) -> Vec<usize> {
    let l = grid.length();
    let mut cells: Vec<(f64, usize)> = (0..grid.len())
        .filter_map(|j| {
            let x = grid.point(j);
            let mut off = x - interval.start;
            if grid.topology() == Topology::Periodic {
                off = off.rem_euclid(l);
            }
            (off > 0.0 && off < interval.length).then_some((off, j))
        })
        .collect();
    cells.sort_by(|a, b| a.0.total_cmp(&b.0));
    cells.into_iter().map(|(_, j)| j).collect()
}

/// Length of the longest run of exact zeros among `values[cells]`.
pub fn largest_zero_run(values: &[f64], cells: &[usize]) -> usize {
    let mut best = 0;
    let mut cur = 0;
    for &j in cells {
        if values[j] == 0.0 {
            cur += 1;
            best = best.max(cur);
        } else {
            cur = 0;
        }
    }
    best
}

/// `A` minus the measure of the largest run of exactly-zero cells inside
/// `interval`.
pub fn zero_interval_measure(field: &RealField, interval: Interval) -> f64 {
    let cells = interval_cells(&field.grid, interval);
    zero_gap_on(field, interval.length, &cells)
}

pub(crate) fn zero_gap_on(field: &RealField, length: f64, cells: &[usize]) -> f64 {
    let run = largest_zero_run(&field.values, cells);
    (length - run as f64 * field.grid.spacing()).max(0.0)
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}

fn window_points(series: &TimeSeries, window: (f64, f64)) -> Result<(Vec<f64>, Vec<f64>)> {
    let w = series.window(window.0, window.1);
    if w.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "fit window [{}, {}] holds {} samples",
            window.0,
            window.1,
            w.len()
        )));
    }
    for (t, v) in w.iter() {
        if !(v > 0.0) {
            return Err(Error::NonPositiveValues { t, value: v });
        }
    }
    Ok((w.times.clone(), w.values.clone()))
}

/// Least-squares slope of `log v` against `log t` over the window.
pub fn fit_algebraic_rate(series: &TimeSeries, window: (f64, f64)) -> Result<f64> {
    let (ts, vs) = window_points(series, window)?;
    if ts.iter().any(|&t| t <= 0.0) {
        return Err(Error::InvalidArgument("algebraic fit needs positive times".into()));
    }
    let lx: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let ly: Vec<f64> = vs.iter().map(|v| v.ln()).collect();
    Ok(least_squares_slope(&lx, &ly))
}

/// Least-squares slope of `ln v` against `t` over the window.
pub fn fit_exponential_rate(series: &TimeSeries, window: (f64, f64)) -> Result<f64> {
    let (ts, vs) = window_points(series, window)?;
    let ly: Vec<f64> = vs.iter().map(|v| v.ln()).collect();
    Ok(least_squares_slope(&ts, &ly))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonReport {
    /// `(t, max_j (u_j - v_j)_+)` per snapshot pair.
    pub violations: Vec<(f64, f64)>,
    pub max_violation: f64,
    /// Smallest value of the lower record, for nonnegativity checks.
    pub min_lower: f64,
}

impl ComparisonReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_violation <= tol
    }
}

/// Compares two fields pointwise.
pub fn field_violation(lower: &RealField, upper: &RealField) -> Result<f64> {
    if lower.grid != upper.grid {
        return Err(Error::MismatchedGrids("fields live on different grids".into()));
    }
    Ok(lower
        .values
        .iter()
        .zip(&upper.values)
        .fold(0.0_f64, |m, (u, v)| m.max(u - v)))
}

/// Checks `lower <= upper` on every pair of stored snapshots.
pub fn check_comparison(lower: &RunRecord, upper: &RunRecord) -> Result<ComparisonReport> {
    let (a, b) = (lower.snapshots(), upper.snapshots());
    if a.len() != b.len() {
        return Err(Error::MismatchedGrids(format!(
            "records hold {} and {} snapshots",
            a.len(),
            b.len()
        )));
    }
    let mut violations = Vec::with_capacity(a.len());
    let mut max_violation = 0.0_f64;
    let mut min_lower = f64::INFINITY;
    for (u, v) in a.iter().zip(b) {
        if (u.time - v.time).abs() > 1e-9 * (1.0 + u.time.abs()) {
            return Err(Error::MismatchedGrids(format!(
                "snapshot times {} and {} differ",
                u.time, v.time
            )));
        }
        let d = field_violation(u, v)?;
        violations.push((u.time, d));
        max_violation = max_violation.max(d);
        min_lower = u.values.iter().fold(min_lower, |m, &x| m.min(x));
    }
    Ok(ComparisonReport {
        violations,
        max_violation,
        min_lower,
    })
}

/// Largest drop `u_j - u_{j+1}` across consecutive cells lying in `[lo, hi]`.
pub fn monotonicity_defect(field: &RealField, lo: f64, hi: f64) -> f64 {
    let mut worst = 0.0_f64;
    let mut prev: Option<f64> = None;
    for (j, &u) in field.values.iter().enumerate() {
        let x = field.grid.point(j);
        if x < lo || x > hi {
            prev = None;
            continue;
        }
        if let Some(p) = prev {
            worst = worst.max(p - u);
        }
        prev = Some(u);
    }
    worst
}

#[derive(Clone, Debug, PartialEq)]
pub struct ControlReport {
    pub delta: f64,
    pub deadline: f64,
    pub inf_speed: f64,
    pub dt: f64,
    pub extinction_time: Option<f64>,
    pub passed: bool,
}

/// Feedback gain `delta = K^alpha inf|f'| / (alpha gamma L)` and deadline
/// `(1 + gamma) L / inf|f'|`.
pub fn control_parameters(
    flux: &FluxModel,
    k: f64,
    gamma: f64,
    length: f64,
    alpha: f64,
) -> Result<(f64, f64, f64)> {
    if !(k > 0.0 && gamma > 0.0 && length > 0.0) {
        return Err(Error::InvalidArgument("K, gamma and the domain length must be positive".into()));
    }
    let (inf, _) = flux.speed_range(k, 10_000);
    if flux.speed_at_zero() == 0.0 || inf <= 0.0 {
        return Err(Error::FluxViolatesTransport { k, inf });
    }
    let delta = k.powf(alpha) * inf / (alpha * gamma * length);
    let deadline = (1.0 + gamma) * length / inf;
    Ok((delta, deadline, inf))
}

/// Runs the closed-loop system from the constant datum `K` with the
/// feedback active on `(0, gamma L)` and checks the deadline.
pub fn control_scenario(
    flux: &FluxModel,
    k: f64,
    gamma: f64,
    length: f64,
    alpha: f64,
    n_cells: usize,
) -> Result<ControlReport> {
    let (delta, deadline, inf) = control_parameters(flux, k, gamma, length, alpha)?;
    let mut cfg = RunConfig::conservation(n_cells, flux.clone(), InitialDatum::Constant { value: k });
    cfg.length = length;
    cfg.delta = delta;
    cfg.alpha = alpha;
    let support = (gamma * length).min(length);
    cfg.omega = if support >= length {
        crate::config::Omega::Everywhere
    } else {
        crate::config::Omega::Intervals(vec![Interval::new(0.0, support)])
    };
    let (_, sup) = flux.speed_range(k, 1000);
    cfg.dt = 0.9 * cfg.grid()?.spacing() / sup;
    cfg.t_final = deadline + 10.0 * cfg.dt;
    cfg.snapshot_interval = cfg.t_final;
    cfg.validate()?;
    let rec = run_conservation(&cfg)?;
    let ext = rec
        .series("sup_norm")
        .and_then(|s| detect_extinction(s, EXTINCTION_THRESHOLD));
    let passed = ext.is_some_and(|t| t <= deadline + 2.0 * cfg.dt);
    Ok(ControlReport {
        delta,
        deadline,
        inf_speed: inf,
        dt: cfg.dt,
        extinction_time: ext,
        passed,
    })
}
