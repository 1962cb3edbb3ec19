//! Indicator damping profiles `a(x) = delta 1_omega(x)` and the exact
//! pointwise flow of `du/dt = -a(x) u / |u|^alpha`.
//!
//! The flow is always applied in closed form,
//! `u(t) = sign(u0) (|u0|^alpha - alpha a t)_+^(1/alpha)`, which clamps to
//! an exact zero at the extinction instant.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{ComplexField, Grid1D, RealField, Topology};

/// Open interval `(start, start + length)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub start: f64,
    pub length: f64,
}

impl Interval {
    pub fn new(start: f64, length: f64) -> Self {
        Self { start, length }
    }

    pub fn end(&self) -> f64 {
        self.start + self.length
    }

    fn contains_open(&self, x: f64) -> bool {
        x > self.start && x < self.end()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Support {
    Everywhere,
    /// Union of open intervals.
    Intervals(Vec<Interval>),
}

/// `a(x) = level * 1_support(x)` together with the exponent `alpha`.
#[derive(Clone, Debug, PartialEq)]
pub struct DampingProfile {
    level: f64,
    support: Support,
    alpha: f64,
    /// `(origin, length)` of a periodic domain; points are wrapped into it.
    period: Option<(f64, f64)>,
}

impl DampingProfile {
    pub fn new(level: f64, support: Support, alpha: f64) -> Result<Self> {
        if !(level >= 0.0 && level.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "damping level must be nonnegative, got {level}"
            )));
        }
        check_alpha(alpha)?;
        if let Support::Intervals(iv) = &support {
            if iv.is_empty() {
                return Err(Error::InvalidArgument("empty damping support".into()));
            }
            if let Some(bad) = iv.iter().find(|i| !(i.length > 0.0) || !i.start.is_finite()) {
                return Err(Error::InvalidArgument(format!("bad damping interval {bad:?}")));
            }
        }
        Ok(Self {
            level,
            support,
            alpha,
            period: None,
        })
    }

    pub fn interval(level: f64, start: f64, length: f64, alpha: f64) -> Result<Self> {
        Self::new(level, Support::Intervals(vec![Interval::new(start, length)]), alpha)
    }

    pub fn everywhere(level: f64, alpha: f64) -> Result<Self> {
        Self::new(level, Support::Everywhere, alpha)
    }

    /// No damping at all.
    pub fn none(alpha: f64) -> Result<Self> {
        Self::new(0.0, Support::Everywhere, alpha)
    }

    /// Makes evaluation wrap `x` into `[origin, origin + length)`.
    pub fn periodic_on(mut self, origin: f64, length: f64) -> Self {
        self.period = Some((origin, length));
        self
    }

    /// Attaches the periodicity of `grid` when it is periodic.
    pub fn on_grid(self, grid: &Grid1D) -> Self {
        match grid.topology() {
            Topology::Periodic => self.periodic_on(grid.origin(), grid.length()),
            Topology::Dirichlet => self,
        }
    }

    pub fn level(&self) -> f64 {
        self.level
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    pub fn with_level(&self, level: f64) -> Result<Self> {
        let mut p = Self::new(level, self.support.clone(), self.alpha)?;
        p.period = self.period;
        Ok(p)
    }

    /// Whether `x` lies in the (open) support.
    pub fn in_support(&self, x: f64) -> bool {
        match &self.support {
            Support::Everywhere => true,
            Support::Intervals(iv) => match self.period {
                None => iv.iter().any(|i| i.contains_open(x)),
                Some((o, l)) => {
                    let r = (x - o).rem_euclid(l);
                    let y = o + if r >= l { 0.0 } else { r };
                    iv.iter().any(|i| {
                        i.contains_open(y) || i.contains_open(y + l) || i.contains_open(y - l)
                    })
                }
            },
        }
    }

    /// `a(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        if self.in_support(x) {
            self.level
        } else {
            0.0
        }
    }

    /// `a` sampled at every point of `grid`.
    pub fn coefficients(&self, grid: &Grid1D) -> Vec<f64> {
        grid.points().into_iter().map(|x| self.eval(x)).collect()
    }

    /// Total measure of the support (domain length for `Everywhere`).
    pub fn support_measure(&self) -> Option<f64> {
        match &self.support {
            Support::Everywhere => self.period.map(|(_, l)| l),
            Support::Intervals(iv) => Some(iv.iter().map(|i| i.length).sum()),
        }
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("alpha must lie in (0, 1], got {alpha}")))
    }
}

/// Exact flow of `u' = -a u/|u|^alpha` over a time `t >= 0`.
#[inline]
pub fn flow_value(u: f64, a: f64, alpha: f64, t: f64) -> f64 {
    if a == 0.0 || t == 0.0 || u == 0.0 {
        return u;
    }
    let m = u.abs();
    if alpha == 1.0 {
        let r = m - a * t;
        if r > 0.0 {
            r.copysign(u)
        } else {
            0.0
        }
    } else {
        let r = m.powf(alpha) - alpha * a * t;
        if r > 0.0 {
            r.powf(1.0 / alpha).copysign(u)
        } else {
            0.0
        }
    }
}

/// Modulus flows as in the real case; the argument is preserved.
#[inline]
pub fn flow_complex_value(u: Complex64, a: f64, alpha: f64, t: f64) -> Complex64 {
    if a == 0.0 || t == 0.0 {
        return u;
    }
    let m = u.norm();
    if m == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let new = flow_value(m, a, alpha, t);
    if new == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        u * (new / m)
    }
}

/// Applies the real flow in place with per-point coefficients.
pub fn apply_real(values: &mut [f64], coeffs: &[f64], alpha: f64, t: f64) {
    debug_assert_eq!(values.len(), coeffs.len());
    for (u, &a) in values.iter_mut().zip(coeffs) {
        *u = flow_value(*u, a, alpha, t);
    }
}

/// Applies the complex flow in place with per-point coefficients.
pub fn apply_complex(values: &mut [Complex64], coeffs: &[f64], alpha: f64, t: f64) {
    debug_assert_eq!(values.len(), coeffs.len());
    for (u, &a) in values.iter_mut().zip(coeffs) {
        *u = flow_complex_value(*u, a, alpha, t);
    }
}

pub fn damping_flow_real(field: &RealField, profile: &DampingProfile, dt: f64) -> Result<RealField> {
    check_dt(dt)?;
    let coeffs = profile.coefficients(&field.grid);
    let mut out = field.clone();
    apply_real(&mut out.values, &coeffs, profile.alpha(), dt);
    out.time += dt;
    Ok(out)
}

pub fn damping_flow_complex(
    field: &ComplexField,
    profile: &DampingProfile,
    dt: f64,
) -> Result<ComplexField> {
    check_dt(dt)?;
    let coeffs = profile.coefficients(&field.grid);
    let mut out = field.clone();
    apply_complex(&mut out.values, &coeffs, profile.alpha(), dt);
    out.time += dt;
    Ok(out)
}

/// Time at which the pointwise flow started from `u0` reaches zero.
pub fn pointwise_extinction_time(u0: f64, a: f64, alpha: f64) -> f64 {
    if u0 == 0.0 {
        0.0
    } else if a == 0.0 {
        f64::INFINITY
    } else {
        u0.abs().powf(alpha) / (alpha * a)
    }
}

fn check_dt(dt: f64) -> Result<()> {
    if dt >= 0.0 && dt.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("time step must be nonnegative, got {dt}")))
    }
}
