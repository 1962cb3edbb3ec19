//! Characteristic curves `dX/dt = f'(u(t, X))` of a computed solution.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::flux::FluxModel;
use crate::grid::RealField;
use crate::record::RunRecord;

/// Snapshot spacing allowed by [`trace_bundle`], in units of the run's `dt`.
pub const MAX_CADENCE: f64 = 10.0;

/// One explicit midpoint step in a frozen field, wrapped into the domain.
pub fn advance_characteristics(positions: &[f64], field: &RealField, flux: &FluxModel, dt: f64) -> Vec<f64> {
    let vel = |x: f64| flux.df(field.interpolate(x));
    positions
        .iter()
        .map(|&x| {
            let xm = x + 0.5 * dt * vel(x);
            field.grid.wrap(x + dt * vel(xm))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct CharacteristicBundle {
    pub seeds: Vec<f64>,
    pub t0: f64,
    /// Per seed, `(t, x)` samples with `x` wrapped into the domain.
    pub paths: Vec<Vec<(f64, f64)>>,
    pub origin: f64,
    pub length: f64,
    /// Number of sample times at which the cyclic order of the seeds broke.
    pub ordering_violations: usize,
}

impl CharacteristicBundle {
    /// CSV rows `seed_id,t,x`.
    pub fn to_csv(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::from("seed_id,t,x\n");
        for (i, p) in self.paths.iter().enumerate() {
            for &(t, x) in p {
                let _ = writeln!(out, "{i},{},{}", crate::io::fmt_f64(t), crate::io::fmt_f64(x));
            }
        }
        out
    }
}

/// Linear interpolation in time between stored snapshots.
struct TimeInterp<'a> {
    snaps: &'a [RealField],
}

impl TimeInterp<'_> {
    fn value(&self, t: f64, x: f64) -> f64 {
        let s = self.snaps;
        let i = s.partition_point(|f| f.time <= t);
        if i == 0 {
            return s[0].interpolate(x);
        }
        if i == s.len() {
            return s[s.len() - 1].interpolate(x);
        }
        let (a, b) = (&s[i - 1], &s[i]);
        let th = (t - a.time) / (b.time - a.time);
        (1.0 - th) * a.interpolate(x) + th * b.interpolate(x)
    }
}

/// Traces every seed from `t0` to the end of the record with the run's `dt`,
/// keeping every `stride`-th sample.
pub fn trace_bundle(record: &RunRecord, seeds: &[f64], t0: f64) -> Result<CharacteristicBundle> {
    trace_bundle_strided(record, seeds, t0, 1)
}

pub fn trace_bundle_strided(
    record: &RunRecord,
    seeds: &[f64],
    t0: f64,
    stride: usize,
) -> Result<CharacteristicBundle> {
    let snaps = record.snapshots();
    if snaps.len() < 2 {
        return Err(Error::EmptyTrace);
    }
    let dt = record.config.dt;
    let limit = MAX_CADENCE * dt;
    for w in snaps.windows(2) {
        let spacing = w[1].time - w[0].time;
        if spacing > limit * (1.0 + 1e-9) {
            return Err(Error::SparseRecord { spacing, limit });
        }
    }
    let grid = &snaps[0].grid;
    let t_end = snaps[snaps.len() - 1].time;
    if !(t0 >= snaps[0].time && t0 < t_end) {
        return Err(Error::OutOfRange { t: t0, lower: snaps[0].time });
    }
    let flux = &record.config.flux;
    let interp = TimeInterp { snaps };
    let n_steps = ((t_end - t0) / dt - 1e-9).ceil() as usize;
    let stride = stride.max(1);

    // unwrapped paths, so the cyclic order can be checked afterwards
    let raw: Vec<Vec<(f64, f64)>> = seeds
        .par_iter()
        .map(|&x0| {
            let mut path = Vec::with_capacity(n_steps / stride + 2);
            let mut x = x0;
            path.push((t0, x));
            for n in 0..n_steps {
                let t = t0 + n as f64 * dt;
                let h = dt.min(t_end - t);
                let v1 = flux.df(interp.value(t, x));
                let xm = x + 0.5 * h * v1;
                let v2 = flux.df(interp.value(t + 0.5 * h, xm));
                x += h * v2;
                if (n + 1) % stride == 0 || n + 1 == n_steps {
                    path.push((t + h, x));
                }
            }
            path
        })
        .collect();

    let mut order: Vec<usize> = (0..seeds.len()).collect();
    order.sort_by(|&a, &b| seeds[a].total_cmp(&seeds[b]));
    let mut violations = 0;
    let samples = raw.first().map_or(0, Vec::len);
    // k walks time samples across all paths at once
    #[allow(clippy::needless_range_loop)]
    for k in 0..samples {
        let broken = order.windows(2).any(|w| raw[w[1]][k].1 < raw[w[0]][k].1 - 1e-12)
            || order.len() > 1
                && raw[order[order.len() - 1]][k].1 - raw[order[0]][k].1 > grid.length() + 1e-12;
        if broken {
            violations += 1;
        }
    }

    let paths = raw
        .into_iter()
        .map(|p| p.into_iter().map(|(t, x)| (t, grid.wrap(x))).collect())
        .collect();
    Ok(CharacteristicBundle {
        seeds: seeds.to_vec(),
        t0,
        paths,
        origin: grid.origin(),
        length: grid.length(),
        ordering_violations: violations,
    })
}

/// `n` seeds at the centers of `n` equal pieces of the domain.
pub fn uniform_seeds(origin: f64, length: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| origin + (i as f64 + 0.5) * length / n as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{InitialDatum, RunConfig};
    use crate::grid::Grid1D;

    fn constant(n: usize, v: f64) -> RealField {
        RealField::sample(Grid1D::periodic(n, 1.0, 0.0).unwrap(), |_| v).unwrap()
    }

    #[test]
    fn constant_field_moves_uniformly() {
        let f = constant(50, 1.25);
        let x = advance_characteristics(&[0.1, 0.5], &f, &FluxModel::Burgers, 0.01);
        assert!((x[0] - 0.1125).abs() < 1e-15);
        assert!((x[1] - 0.5125).abs() < 1e-15);
    }

    #[test]
    fn zero_field_is_stationary() {
        let f = constant(50, 0.0);
        let x = advance_characteristics(&[0.3, 0.999], &f, &FluxModel::Burgers, 0.1);
        assert_eq!(x, vec![0.3, 0.999]);
    }

    #[test]
    fn linear_flux_moves_at_c_and_wraps() {
        let f = RealField::sample(Grid1D::periodic(50, 1.0, 0.0).unwrap(), |x| x * x).unwrap();
        let x = advance_characteristics(&[0.2, 0.99], &f, &FluxModel::linear(2.0), 0.01);
        assert!((x[0] - 0.22).abs() < 1e-15);
        assert!((x[1] - 0.01).abs() < 1e-12);
    }

    fn record(snapshot_interval: f64) -> RunRecord {
        let mut cfg = RunConfig::conservation(100, FluxModel::Burgers, InitialDatum::Constant { value: 1.0 });
        cfg.dt = 0.005;
        cfg.t_final = 0.5;
        cfg.snapshot_interval = snapshot_interval;
        crate::hyperbolic::run_conservation(&cfg).unwrap()
    }

    #[test]
    fn sparse_record_rejected() {
        let rec = record(0.1);
        assert!(matches!(trace_bundle(&rec, &[0.5], 0.0), Err(Error::SparseRecord { .. })));
    }

    #[test]
    fn bundle_on_constant_solution() {
        let rec = record(0.01);
        let b = trace_bundle(&rec, &uniform_seeds(0.0, 1.0, 8), 0.0).unwrap();
        assert_eq!(b.ordering_violations, 0);
        for (p, &x0) in b.paths.iter().zip(&b.seeds) {
            let &(t, x) = p.last().unwrap();
            assert!((t - 0.5).abs() < 1e-12);
            let want = Grid1D::periodic(100, 1.0, 0.0).unwrap().wrap(x0 + 0.5);
            assert!((x - want).abs() < 1e-9);
            for w in p.windows(2) {
                assert!(w[1].0 > w[0].0);
            }
        }
    }
}
