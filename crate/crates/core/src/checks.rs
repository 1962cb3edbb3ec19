//! Named pass/fail diagnostics over a finished [`RunRecord`].
//!
//! Every check reads only the record (series, snapshots and the config
//! echo), so it works equally on a record in memory or one read back from
//! disk.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::analysis::{detect_extinction, fit_exponential_rate, monotonicity_defect, zero_interval_measure};
use crate::companions::nls::periodic_soliton;
use crate::config::{InitialDatum, Model, Omega};
use crate::error::{Error, Result};
use crate::grid::RealField;
use crate::hyperbolic::EXTINCTION_THRESHOLD;
use crate::io::TimeSeries;
use crate::record::RunRecord;

pub const CHECKS: &[&str] = &[
    "extinction",
    "persistence",
    "uniform-extinction",
    "monotone-outside",
    "zero-set",
    "eigen-decay",
    "sine-profile",
    "energy-decay",
    "support-velocity",
    "mass-conservation",
    "soliton",
    "support-mass",
];

/// Tolerance for order checks between cells.
pub const ORDER_TOLERANCE: f64 = 1e-12;
/// Relative tolerance on the fitted post-extinction rate and the sine shape.
pub const EIGEN_TOLERANCE: f64 = 0.05;
pub const SOLITON_TOLERANCE: f64 = 1e-2;
/// Relative mass drift allowed per thousand steps of the free NLS flow.
pub const MASS_DRIFT_PER_1000: f64 = 1e-10;
/// Fraction of the initial mass left on the damping support.
pub const SUPPORT_MASS_FRACTION: f64 = 1e-6;
pub const VELOCITY_THRESHOLD: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub values: Vec<(String, f64)>,
}

impl CheckOutcome {
    fn new(name: &str, passed: bool, values: &[(&str, f64)]) -> Self {
        Self {
            name: name.to_string(),
            passed,
            values: values.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }

    pub fn value(&self, key: &str) -> Option<f64> {
        self.values.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    /// `name: PASS|FAIL` followed by indented `key=value` lines.
    pub fn to_text(&self) -> String {
        let mut s = format!("{}: {}\n", self.name, if self.passed { "PASS" } else { "FAIL" });
        for (k, v) in &self.values {
            let _ = writeln!(s, "  {}.{k}={v}", self.name);
        }
        s
    }
}

fn series<'a>(rec: &'a RunRecord, name: &str, check: &str) -> Result<&'a TimeSeries> {
    rec.series(name)
        .filter(|s| !s.is_empty())
        .ok_or_else(|| Error::InvalidArgument(format!("check {check} needs the {name} series")))
}

fn last_snapshot<'a>(rec: &'a RunRecord, check: &str) -> Result<&'a RealField> {
    rec.snapshots()
        .last()
        .ok_or_else(|| Error::InvalidArgument(format!("check {check} needs stored snapshots")))
}

fn require_model(rec: &RunRecord, models: &[Model], check: &str) -> Result<()> {
    if models.contains(&rec.config.model) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "check {check} does not apply to {} records",
            rec.config.model.as_str()
        )))
    }
}

pub fn run_check(name: &str, rec: &RunRecord) -> Result<CheckOutcome> {
    let cfg = &rec.config;
    match name {
        "extinction" | "persistence" => {
            let s = series(rec, "sup_norm", name)?;
            let ext = detect_extinction(s, EXTINCTION_THRESHOLD);
            let last = s.values.last().copied().unwrap_or(0.0);
            let passed = (name == "extinction") == ext.is_some();
            Ok(CheckOutcome::new(
                name,
                passed,
                &[("extinction_time", ext.unwrap_or(f64::NAN)), ("final_sup", last)],
            ))
        }
        "uniform-extinction" => {
            require_model(rec, &[Model::Conservation], name)?;
            if cfg.omega != Omega::Everywhere {
                return Err(Error::InvalidArgument(
                    "uniform-extinction needs damping.omega = everywhere".into(),
                ));
            }
            let s = series(rec, "sup_norm", name)?;
            let expected = s.values[0].powf(cfg.alpha) / (cfg.alpha * cfg.delta);
            let ext = detect_extinction(s, EXTINCTION_THRESHOLD).unwrap_or(f64::NAN);
            let passed = (ext - expected).abs() <= 2.0 * cfg.dt;
            Ok(CheckOutcome::new(
                name,
                passed,
                &[("extinction_time", ext), ("expected", expected)],
            ))
        }
        "monotone-outside" => {
            require_model(rec, &[Model::Conservation], name)?;
            let lo = cfg.primary_interval().end();
            let hi = cfg.origin + cfg.length;
            let worst = rec
                .snapshots()
                .iter()
                .map(|f| monotonicity_defect(f, lo, hi))
                .fold(0.0_f64, f64::max);
            Ok(CheckOutcome::new(name, worst <= ORDER_TOLERANCE, &[("max_defect", worst)]))
        }
        "zero-set" => {
            require_model(rec, &[Model::Conservation, Model::Viscous], name)?;
            let iv = cfg.primary_interval();
            let gap = zero_interval_measure(last_snapshot(rec, name)?, iv);
            Ok(CheckOutcome::new(
                name,
                gap < iv.length,
                &[("gap", gap), ("support_length", iv.length)],
            ))
        }
        "eigen-decay" => {
            require_model(rec, &[Model::Viscous], name)?;
            let s = series(rec, "sup_norm", name)?;
            let lambda = PI / (cfg.length - cfg.primary_interval().length);
            let expected = -cfg.mu * lambda * lambda;
            let rate = fit_exponential_rate(s, (0.5 * cfg.t_final, cfg.t_final))?;
            let rel = ((rate - expected) / expected).abs();
            Ok(CheckOutcome::new(
                name,
                rel <= EIGEN_TOLERANCE,
                &[("rate", rate), ("expected", expected), ("relative_error", rel)],
            ))
        }
        "sine-profile" => {
            require_model(rec, &[Model::Viscous], name)?;
            let iv = cfg.primary_interval();
            let err = sine_profile_error(last_snapshot(rec, name)?, iv.end(), cfg.origin + cfg.length);
            Ok(CheckOutcome::new(name, err < EIGEN_TOLERANCE, &[("relative_l2_error", err)]))
        }
        "energy-decay" => {
            require_model(rec, &[Model::Wave], name)?;
            let e = series(rec, "energy", name)?;
            let e0 = e.values[0];
            let rise = e
                .values
                .windows(2)
                .map(|w| w[1] - w[0])
                .fold(0.0_f64, f64::max);
            let last = *e.values.last().unwrap();
            let passed = rise <= 1e-10 * e0 && last < e0;
            Ok(CheckOutcome::new(
                name,
                passed,
                &[("initial", e0), ("final", last), ("max_rise", rise)],
            ))
        }
        "support-velocity" => {
            require_model(rec, &[Model::Wave], name)?;
            let s = series(rec, "sup_v_on_support", name)?;
            let t = detect_extinction(s, VELOCITY_THRESHOLD);
            let last_above = s
                .iter()
                .filter(|&(_, v)| v >= VELOCITY_THRESHOLD)
                .map(|(t, _)| t)
                .fold(f64::NAN, f64::max);
            Ok(CheckOutcome::new(
                name,
                t.is_some(),
                &[("settle_time", t.unwrap_or(f64::NAN)), ("last_above", last_above)],
            ))
        }
        "mass-conservation" => {
            require_model(rec, &[Model::Nls], name)?;
            let m = series(rec, "mass", name)?;
            let m0 = m.values[0];
            let drift = m
                .values
                .iter()
                .map(|v| (v - m0).abs() / m0)
                .fold(0.0_f64, f64::max);
            let allowed = MASS_DRIFT_PER_1000 * (cfg.n_steps() as f64 / 1000.0).max(1.0);
            Ok(CheckOutcome::new(
                name,
                drift <= allowed,
                &[("relative_drift", drift), ("allowed", allowed)],
            ))
        }
        "soliton" => {
            require_model(rec, &[Model::Nls], name)?;
            if cfg.initial != InitialDatum::Soliton {
                return Err(Error::InvalidArgument("soliton check needs initial = soliton".into()));
            }
            let mut err = 0.0_f64;
            for f in &rec.complex_snapshots {
                for (j, z) in f.values.iter().enumerate() {
                    let exact = periodic_soliton(
                        &f.grid,
                        f.grid.point(j),
                        f.time,
                        cfg.nls_c,
                        cfg.nls_k,
                        cfg.nls_q,
                    );
                    err = err.max((z - exact).norm());
                }
            }
            Ok(CheckOutcome::new(name, err <= SOLITON_TOLERANCE, &[("sup_error", err)]))
        }
        "support-mass" => {
            require_model(rec, &[Model::Nls], name)?;
            let ms = series(rec, "mass_on_support", name)?;
            let m0 = series(rec, "mass", name)?.values[0];
            let thr = SUPPORT_MASS_FRACTION * m0;
            let t = detect_extinction(ms, thr);
            Ok(CheckOutcome::new(
                name,
                t.is_some(),
                &[
                    ("settle_time", t.unwrap_or(f64::NAN)),
                    ("final_fraction", ms.values.last().unwrap() / m0),
                ],
            ))
        }
        other => Err(Error::InvalidArgument(format!(
            "unknown check {other:?}; available: {}",
            CHECKS.join(", ")
        ))),
    }
}

/// Relative L2 distance between the field on `(lo, hi)` and its best
/// multiple of `sin(pi (x - lo) / (hi - lo))`.
pub fn sine_profile_error(field: &RealField, lo: f64, hi: f64) -> f64 {
    let lambda = PI / (hi - lo);
    let pairs: Vec<(f64, f64)> = field
        .values
        .iter()
        .enumerate()
        .filter_map(|(j, &u)| {
            let x = field.grid.point(j);
            (x > lo && x < hi).then(|| (u, (lambda * (x - lo)).sin()))
        })
        .collect();
    let uu: f64 = pairs.iter().map(|(u, _)| u * u).sum();
    let ss: f64 = pairs.iter().map(|(_, s)| s * s).sum();
    if uu == 0.0 || ss == 0.0 {
        return f64::INFINITY;
    }
    let c = pairs.iter().map(|(u, s)| u * s).sum::<f64>() / ss;
    let res: f64 = pairs.iter().map(|(u, s)| (u - c * s).powi(2)).sum();
    (res / uu).sqrt()
}
