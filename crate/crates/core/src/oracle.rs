//! Semi-analytic description of the solution for a constant datum `K`, a
//! convex flux with `f'(0) = 0` and `a = delta 1_(0, A)` on a torus of
//! length `L`.
//!
//! A characteristic entering the damped interval at `x = 0` with value `w`
//! either dies inside it (when `w <= eps`) or leaves it at `x = A` after a
//! crossing time `s(w)` with value `V(w) = (w^alpha - delta alpha s(w))^(1/alpha)`,
//! then needs `(L - A)/f'(V(w))` to come back to `x = 0`. Everything below is
//! built from `g`, `s` and `V`.

use std::sync::OnceLock;

use crate::config::{InitialDatum, Omega, RunConfig};
use crate::damping::check_alpha;
use crate::error::{Error, Result};
use crate::flux::FluxModel;
use crate::io::TimeSeries;

const ROOT_TOL: f64 = 1e-12;
const QUAD_TOL: f64 = 1e-13;

fn gauss_legendre_10() -> &'static [(f64, f64)] {
    static NODES: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    NODES.get_or_init(|| {
        let n = 10;
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            // Newton on P_n from the Chebyshev guess
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let k = k as f64;
                    let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
        }
        out
    })
}

fn gl(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    h * gauss_legendre_10()
        .iter()
        .map(|&(x, w)| w * f(c + h * x))
        .sum::<f64>()
}

fn adaptive(f: &impl Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (l, r) = (gl(f, a, m), gl(f, m, b));
    if depth == 0 || (l + r - whole).abs() <= tol {
        l + r
    } else {
        adaptive(f, a, m, l, 0.5 * tol, depth - 1) + adaptive(f, m, b, r, 0.5 * tol, depth - 1)
    }
}

/// Adaptive 10-point Gauss–Legendre quadrature.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let whole = gl(&f, a, b);
    adaptive(&f, a, b, whole, tol, 40)
}

/// Root of an increasing function on `[lo, hi]` with `f(lo) <= 0 <= f(hi)`.
pub fn bisect(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleInput {
    pub flux: FluxModel,
    pub k: f64,
    pub delta: f64,
    /// Length `A` of the damped interval.
    pub a_len: f64,
    pub alpha: f64,
    /// Torus length `L`.
    pub length: f64,
}

impl OracleInput {
    pub fn new(flux: FluxModel, k: f64, delta: f64, a_len: f64, alpha: f64, length: f64) -> Result<Self> {
        let bad = |m: String| Err(Error::OracleInput(m));
        if !(k > 0.0 && k.is_finite()) {
            return bad(format!("K must be positive, got {k}"));
        }
        if !(delta > 0.0 && delta.is_finite()) {
            return bad(format!("delta must be positive, got {delta}"));
        }
        if !(length > 0.0 && a_len > 0.0 && a_len < length) {
            return bad(format!("need 0 < A < L, got A={a_len}, L={length}"));
        }
        check_alpha(alpha).map_err(|e| Error::OracleInput(e.to_string()))?;
        if flux.df(0.0).abs() > 1e-12 {
            return bad(format!("flux needs f'(0) = 0, got {}", flux.df(0.0)));
        }
        let n = 1000;
        let h = 2.0 * k / n as f64;
        let min_second = (1..n)
            .map(|i| {
                let x = -k + i as f64 * h;
                flux.f(x + h) - 2.0 * flux.f(x) + flux.f(x - h)
            })
            .fold(f64::INFINITY, f64::min);
        if !(min_second > 0.0) {
            return bad(format!("flux is not strictly convex on [-{k}, {k}]"));
        }
        Ok(Self { flux, k, delta, a_len, alpha, length })
    }

    /// Input for a conservation config with a constant datum and one damped
    /// interval. Negative data use the flux `-f(-s)`, concave fluxes `-f`.
    pub fn from_config(config: &RunConfig) -> Result<Self> {
        let InitialDatum::Constant { value } = config.initial else {
            return Err(Error::OracleInput("the oracle needs a constant initial datum".into()));
        };
        let a_len = match &config.omega {
            Omega::Intervals(iv) if iv.len() == 1 => iv[0].length,
            _ => {
                return Err(Error::OracleInput(
                    "the oracle needs a single damped interval".into(),
                ))
            }
        };
        let mut flux = config.flux.clone();
        let mut k = value;
        if k < 0.0 {
            flux = flux.negate();
            k = -k;
        }
        if flux.d2f(0.0) < 0.0 {
            flux = flux.reflect();
        }
        Self::new(flux, k, config.delta, a_len, config.alpha, config.length)
    }

    fn extinction_duration(&self, u: f64) -> f64 {
        u.powf(self.alpha) / (self.delta * self.alpha)
    }

    /// Value after damping `u` for a time `tau`.
    pub fn damped(&self, u: f64, tau: f64) -> f64 {
        crate::damping::flow_value(u, self.delta, self.alpha, tau)
    }

    /// Distance covered inside the damped interval during `[0, s]` by a
    /// characteristic entering with value `u`.
    pub fn partial_integral(&self, u: f64, s: f64) -> f64 {
        let end = s.min(self.extinction_duration(u));
        if end <= 0.0 {
            return 0.0;
        }
        integrate(|tau| self.flux.df(self.damped(u, tau)), 0.0, end, QUAD_TOL)
    }

    /// Time to travel from the damped interval's exit back to its entrance.
    pub fn travel_time(&self, w: f64) -> f64 {
        let speed = self.flux.df(w);
        if speed > 0.0 {
            (self.length - self.a_len) / speed
        } else {
            f64::INFINITY
        }
    }
}

/// `g(v) = int_0^inf f'((v^alpha - delta alpha tau)_+^(1/alpha)) dtau`.
pub fn g_integral(v: f64, input: &OracleInput) -> f64 {
    if v <= 0.0 {
        return 0.0;
    }
    input.partial_integral(v, f64::INFINITY)
}

/// Root of `g(eps) = A` on `[0, K]`, or `None` when `g(K) < A`.
pub fn epsilon_threshold(input: &OracleInput) -> Option<f64> {
    if g_integral(input.k, input) < input.a_len {
        return None;
    }
    Some(bisect(|v| g_integral(v, input) - input.a_len, 0.0, input.k, ROOT_TOL))
}

/// Crossing time `s` with `int_0^s f'(...) = A` for a value entering at `x = 0`.
pub fn crossing_time(u: f64, input: &OracleInput) -> Result<f64> {
    let full = g_integral(u, input);
    if full + 1e-10 < input.a_len {
        return Err(Error::NoCrossing {
            value: u,
            epsilon: epsilon_threshold(input).unwrap_or(f64::NAN),
        });
    }
    let end = input.extinction_duration(u);
    // near eps the partial integral is flat at its end point; treat a
    // quadrature-level excess as the boundary case
    if full <= input.a_len + 1e-10 {
        return Ok(end);
    }
    Ok(bisect(|s| input.partial_integral(u, s) - input.a_len, 0.0, end, ROOT_TOL))
}

/// Exit value `V(w)`, zero when the characteristic dies inside.
pub fn exit_value(w: f64, input: &OracleInput) -> Result<(f64, f64)> {
    let s = crossing_time(w, input)?;
    Ok((s, input.damped(w, s)))
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Sequences {
    pub u: Vec<f64>,
    pub t: Vec<f64>,
    pub v: Vec<f64>,
    pub tau: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleReport {
    pub input: OracleInput,
    /// `None` when damping kills every characteristic on its first entry.
    pub epsilon: Option<f64>,
    /// `u_n, t_n` for `n <= n0` and `v_n, tau_n` for `n < n0`.
    pub sequences: Sequences,
    pub n0: usize,
    /// `t_{n0}`.
    pub t_n0: Option<f64>,
    /// First time the inflow trace `u(t, 0)` reaches `eps`.
    pub t_star_upper: Option<f64>,
    /// `T_star + eps^alpha/(delta alpha)`: the zero set reaches `x = A`.
    pub t_star: Option<f64>,
    /// `max v_n/u_n`.
    pub contraction: f64,
    pub beta_minus: f64,
    pub beta_plus: f64,
}

impl OracleReport {
    #[allow(non_snake_case)]
    pub fn T_star(&self) -> Option<f64> {
        self.t_star_upper
    }

    pub fn to_text(&self) -> String {
        use std::fmt::Write as _;
        let opt = |v: Option<f64>| v.map_or("none".to_string(), |x| format!("{x:.16e}"));
        let mut out = String::new();
        let i = &self.input;
        let _ = writeln!(out, "flux={}", i.flux.id());
        let _ = writeln!(out, "K={:.16e}", i.k);
        let _ = writeln!(out, "delta={:.16e}", i.delta);
        let _ = writeln!(out, "A={:.16e}", i.a_len);
        let _ = writeln!(out, "alpha={:.16e}", i.alpha);
        let _ = writeln!(out, "L={:.16e}", i.length);
        let _ = writeln!(out, "epsilon={}", opt(self.epsilon));
        if self.epsilon.is_none() {
            let _ = writeln!(out, "regime=damping dominates: no crossing");
        }
        let _ = writeln!(out, "n0={}", self.n0);
        let _ = writeln!(out, "t_n0={}", opt(self.t_n0));
        let _ = writeln!(out, "T_star={}", opt(self.t_star_upper));
        let _ = writeln!(out, "t_star={}", opt(self.t_star));
        let _ = writeln!(out, "contraction={:.16e}", self.contraction);
        let _ = writeln!(out, "beta_minus={:.16e}", self.beta_minus);
        let _ = writeln!(out, "beta_plus={:.16e}", self.beta_plus);
        let s = &self.sequences;
        for n in 0..s.u.len() {
            let _ = writeln!(out, "u_{n}={:.16e}", s.u[n]);
            let _ = writeln!(out, "t_{n}={:.16e}", s.t[n]);
            if n < s.v.len() {
                let _ = writeln!(out, "v_{n}={:.16e}", s.v[n]);
                let _ = writeln!(out, "tau_{n}={:.16e}", s.tau[n]);
            }
        }
        out
    }
}

/// `inf` and `sup` of `f'(s)/s` on `(0, K]`, with `f''(0)` as the limit at zero.
pub fn beta_bounds(flux: &FluxModel, k: f64) -> (f64, f64) {
    let n = 10_000;
    let mut lo = flux.d2f(0.0);
    let mut hi = lo;
    for i in 1..=n {
        let s = k * i as f64 / n as f64;
        let r = flux.df(s) / s;
        lo = lo.min(r);
        hi = hi.max(r);
    }
    (lo, hi)
}

/// Runs the recursion `u_{n+1} = v_n`, `t_{n+1} = tau_n + (L - A)/f'(v_n)`
/// until `u_n <= eps`, and locates `T_star` on the inflow trace.
pub fn iterate_sequences(input: &OracleInput) -> Result<OracleReport> {
    let (beta_minus, beta_plus) = beta_bounds(&input.flux, input.k);
    let mut report = OracleReport {
        input: input.clone(),
        epsilon: None,
        sequences: Sequences::default(),
        n0: 0,
        t_n0: None,
        t_star_upper: None,
        t_star: None,
        contraction: 0.0,
        beta_minus,
        beta_plus,
    };
    let Some(eps) = epsilon_threshold(input) else {
        return Ok(report);
    };
    report.epsilon = Some(eps);
    let seq = &mut report.sequences;
    let (mut u, mut t) = (input.k, 0.0);
    seq.u.push(u);
    seq.t.push(t);
    while u > eps {
        if seq.u.len() > 100_000 {
            return Err(Error::OracleInput("sequence does not reach eps".into()));
        }
        let (s, v) = exit_value(u, input)?;
        let tau = t + s;
        seq.v.push(v);
        seq.tau.push(tau);
        report.contraction = report.contraction.max(v / u);
        t = tau + input.travel_time(v);
        u = v;
        seq.u.push(u);
        seq.t.push(t);
    }
    report.n0 = seq.u.len() - 1;
    report.t_n0 = Some(t);
    let trace = BoundaryTrace::new(&report)?;
    let t_up = trace.first_time_at_or_below(eps)?;
    report.t_star_upper = Some(t_up);
    report.t_star = Some(t_up + input.extinction_duration(eps));
    Ok(report)
}

/// Semi-analytic inflow trace `phi(t) = u(t, 0^-)`.
///
/// It alternates plateaus `u_m` on `[t_m, t_m + P]`, `P = (L - A)/f'(K)`,
/// with decreasing arcs. Arc `j` carries the characteristics that started
/// inside the damped interval, left it at time `tau_b` with value
/// `(K^alpha - delta alpha tau_b)^(1/alpha)`, and then made `j - 1` further
/// complete crossings.
#[derive(Clone, Debug)]
pub struct BoundaryTrace {
    input: OracleInput,
    eps: f64,
    u: Vec<f64>,
    t: Vec<f64>,
    plateau: f64,
    tau_full: f64,
}

impl BoundaryTrace {
    pub fn new(report: &OracleReport) -> Result<Self> {
        let eps = report
            .epsilon
            .ok_or_else(|| Error::OracleInput("no threshold: damping dominates".into()))?;
        let input = report.input.clone();
        let tau_full = if input.k > eps {
            crossing_time(input.k, &input)?
        } else {
            input.extinction_duration(input.k)
        };
        Ok(Self {
            plateau: input.travel_time(input.k),
            eps,
            u: report.sequences.u.clone(),
            t: report.sequences.t.clone(),
            input,
            tau_full,
        })
    }

    fn n0(&self) -> usize {
        self.u.len() - 1
    }

    /// Arrival time and value at `x = 0` of the arc-`j` characteristic with
    /// parameter `tau_b`; `None` when it dies on the way.
    pub fn arc_point(&self, j: usize, tau_b: f64) -> Result<Option<(f64, f64)>> {
        let mut w = self.input.damped(self.input.k, tau_b);
        if w <= 0.0 {
            return Ok(None);
        }
        let mut time = tau_b + self.input.travel_time(w);
        for _ in 1..j {
            if w <= self.eps {
                return Ok(None);
            }
            let (s, v) = exit_value(w, &self.input)?;
            if v <= 0.0 {
                return Ok(None);
            }
            time += s + self.input.travel_time(v);
            w = v;
        }
        Ok(Some((time, w)))
    }

    /// Parameter range `[0, hi)` of arc `j`.
    fn arc_range(&self, j: usize) -> Result<f64> {
        if j <= self.n0() {
            return Ok(self.tau_full);
        }
        if self.n0() == 0 {
            return Ok(self.input.extinction_duration(self.input.k));
        }
        self.parameter_for_value(self.n0(), self.eps)
    }

    /// `tau_b` on arc `j` whose value equals `w`.
    fn parameter_for_value(&self, j: usize, w: f64) -> Result<f64> {
        let mut err = None;
        let tau = bisect(
            |tb| match self.arc_point(j, tb) {
                Ok(Some((_, v))) => w - v,
                Ok(None) => 1.0,
                Err(e) => {
                    err = Some(e);
                    1.0
                }
            },
            0.0,
            self.tau_full,
            ROOT_TOL,
        );
        match err {
            Some(e) => Err(e),
            None => Ok(tau),
        }
    }

    /// First time with `phi(t) <= w` for `w` in `(0, K)`.
    pub fn first_time_at_or_below(&self, w: f64) -> Result<f64> {
        let n0 = self.n0();
        if self.input.k <= w {
            return Ok(0.0);
        }
        // plateaus are above eps up to n0 - 1; the crossing sits on arc n0
        let j = (1..=n0).find(|&m| self.u[m] <= w).unwrap_or(n0 + 1);
        let tb = if j <= n0 {
            self.parameter_for_value(j, w)?
        } else {
            let hi = self.arc_range(j)?;
            let mut err = None;
            let tb = bisect(
                |tb| match self.arc_point(j, tb) {
                    Ok(Some((_, v))) => w - v,
                    Ok(None) => 1.0,
                    Err(e) => {
                        err = Some(e);
                        1.0
                    }
                },
                0.0,
                hi,
                ROOT_TOL,
            );
            if let Some(e) = err {
                return Err(e);
            }
            tb
        };
        Ok(self
            .arc_point(j, tb)?
            .map(|(t, _)| t)
            .unwrap_or(f64::INFINITY))
    }

    /// `phi(t)`.
    pub fn value_at(&self, t: f64) -> Result<f64> {
        let n0 = self.n0();
        if t <= 0.0 {
            return Ok(self.input.k);
        }
        for m in 0..=n0 {
            if t >= self.t[m] && t <= self.t[m] + self.plateau {
                return Ok(self.u[m]);
            }
        }
        let j = (1..=n0).find(|&m| t < self.t[m]).unwrap_or(n0 + 1);
        let hi = self.arc_range(j)?;
        let mut err = None;
        let tb = bisect(
            |tb| match self.arc_point(j, tb) {
                Ok(Some((time, _))) => time - t,
                Ok(None) => 1.0,
                Err(e) => {
                    err = Some(e);
                    1.0
                }
            },
            0.0,
            hi,
            ROOT_TOL,
        );
        if let Some(e) = err {
            return Err(e);
        }
        Ok(self.arc_point(j, tb)?.map(|(_, v)| v).unwrap_or(0.0))
    }

    /// `phi` on a uniform time lattice of `[t0, t1]`.
    pub fn sample(&self, t0: f64, t1: f64, n: usize) -> Result<TimeSeries> {
        let mut s = TimeSeries::new();
        for i in 0..=n {
            let t = t0 + (t1 - t0) * i as f64 / n.max(1) as f64;
            s.push(t, self.value_at(t)?);
        }
        Ok(s)
    }
}

/// Boundary of the zero set inside the damped interval, parametrized by the
/// inflow trace: `(t0 + u(t0,0)^alpha/(delta alpha), g(u(t0,0)))` for `t0 >= T_star`.
pub fn extinction_curve(trace: &TimeSeries, input: &OracleInput, t_star_upper: f64) -> Result<Vec<(f64, f64)>> {
    let pts: Vec<(f64, f64)> = trace
        .iter()
        .filter(|&(t, _)| t >= t_star_upper)
        .map(|(t0, u)| {
            let u = u.max(0.0);
            (t0 + input.extinction_duration(u), g_integral(u, input))
        })
        .collect();
    if pts.is_empty() {
        return Err(Error::EmptyTrace);
    }
    Ok(pts)
}

/// Upper bounds on the sup-norm and on `|omega \ omega(t)|` for
/// `t > t_star + eps^alpha/(delta alpha)`.
pub fn decay_envelopes(report: &OracleReport, t: f64) -> Result<(f64, f64)> {
    let (Some(eps), Some(t_star)) = (report.epsilon, report.t_star) else {
        return Err(Error::OracleInput("no threshold: damping dominates".into()));
    };
    let i = &report.input;
    let lower = t_star + i.extinction_duration(eps);
    if !(t > lower) {
        return Err(Error::OutOfRange { t, lower });
    }
    let (bm, bp) = (report.beta_minus, report.beta_plus);
    let sup = 1.0 / (bm * (t - lower));
    let gap = bp / (2.0 * i.delta * i.alpha * bm.powf(1.0 + i.alpha)) * (t - t_star).powf(-(1.0 + i.alpha));
    Ok((sup, gap))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn burgers(delta: f64, a: f64, k: f64) -> OracleInput {
        OracleInput::new(FluxModel::Burgers, k, delta, a, 1.0, 1.0).unwrap()
    }

    #[test]
    fn quadrature_polynomial_exact() {
        let v = integrate(|x| x.powi(7) - 3.0 * x, 0.0, 2.0, 1e-14);
        assert!((v - (256.0 / 8.0 - 6.0)).abs() < 1e-12);
        let w = integrate(|x| x.sqrt(), 0.0, 1.0, 1e-13);
        assert!((w - 2.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn g_closed_forms() {
        assert!((g_integral(1.0, &burgers(1.0, 0.25, 1.25)) - 0.5).abs() < 1e-10);
        assert!((g_integral(1.0, &burgers(2.0, 0.25, 1.25)) - 0.25).abs() < 1e-10);
        assert_eq!(g_integral(0.0, &burgers(1.0, 0.25, 1.25)), 0.0);
        // alpha = 1/2: g(v) = v^(3/2) / (delta (3/2))
        let inp = OracleInput::new(FluxModel::Burgers, 1.25, 1.0, 0.25, 0.5, 1.0).unwrap();
        assert!((g_integral(0.8, &inp) - 0.8f64.powf(1.5) / 1.5).abs() < 1e-10);
    }

    #[test]
    fn epsilon_cases() {
        let e = epsilon_threshold(&burgers(1.0, 0.25, 1.25)).unwrap();
        assert!((e - 0.5f64.sqrt()).abs() < 1e-8);
        assert_eq!(epsilon_threshold(&OracleInput::new(FluxModel::Burgers, 1.25, 1.0, 1.0 - 1e-9, 1.0, 2.0).map(|mut i| {
            i.a_len = 1.0;
            i
        }).unwrap()), None);
        let tiny = epsilon_threshold(&burgers(1.0, 1e-8, 1.25)).unwrap();
        assert!(tiny < 1e-3);
    }

    #[test]
    fn crossing_time_cases() {
        let inp = burgers(1.0, 0.25, 1.25);
        let s = crossing_time(1.25, &inp).unwrap();
        assert!((s - (1.25 - 1.0625f64.sqrt())).abs() < 1e-10);
        let eps = epsilon_threshold(&inp).unwrap();
        assert!((crossing_time(eps, &inp).unwrap() - eps).abs() < 1e-8);
        assert!(matches!(crossing_time(eps - 1e-6, &inp), Err(Error::NoCrossing { .. })));
    }

    #[test]
    fn burgers_sequences() {
        let r = iterate_sequences(&burgers(1.0, 0.25, 1.25)).unwrap();
        let s = &r.sequences;
        assert!((s.v[0] - 1.0625f64.sqrt()).abs() < 1e-10);
        assert!((s.u[2] - 0.75).abs() < 1e-10);
        assert!((s.u[3] - 0.25).abs() < 1e-10);
        assert_eq!(r.n0, 3);
        assert!((s.t[1] - (1.25 - 1.0625f64.sqrt() + 0.75 / 1.0625f64.sqrt())).abs() < 1e-9);
        assert!(r.contraction < 1.0);
        for n in 0..r.n0 {
            assert!(s.tau[n] > s.t[n]);
            assert_eq!(s.u[n + 1], s.v[n]);
        }
        assert!((r.beta_minus - 1.0).abs() < 1e-12 && (r.beta_plus - 1.0).abs() < 1e-12);
        let big = iterate_sequences(&burgers(1e6, 0.25, 1.25)).unwrap();
        assert!(big.epsilon.is_none() && big.T_star().is_none());
    }

    #[test]
    fn trace_structure() {
        let r = iterate_sequences(&burgers(1.0, 0.25, 1.25)).unwrap();
        let tr = BoundaryTrace::new(&r).unwrap();
        assert_eq!(tr.value_at(0.3).unwrap(), 1.25);
        assert!((tr.value_at(r.sequences.t[1] + 0.1).unwrap() - r.sequences.u[1]).abs() < 1e-12);
        // continuity at the end of the first plateau
        assert!((tr.value_at(0.6 + 1e-9).unwrap() - 1.25).abs() < 1e-6);
        let t_up = r.T_star().unwrap();
        assert!(t_up < r.t_n0.unwrap());
        assert!((tr.value_at(t_up).unwrap() - r.epsilon.unwrap()).abs() < 1e-8);
        let s = tr.sample(0.0, 12.0, 600).unwrap();
        for w in s.values.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
    }

    #[test]
    fn curve_endpoint_and_envelopes() {
        let r = iterate_sequences(&burgers(1.0, 0.25, 1.25)).unwrap();
        let tr = BoundaryTrace::new(&r).unwrap();
        let t_up = r.T_star().unwrap();
        let series = tr.sample(t_up, t_up + 3.0, 30).unwrap();
        let c = extinction_curve(&series, &r.input, t_up).unwrap();
        assert!((c[0].0 - r.t_star.unwrap()).abs() < 1e-8);
        assert!((c[0].1 - 0.25).abs() < 1e-8);
        for (&(_, x), (_, u)) in c.iter().zip(series.iter()) {
            assert!((x - u * u / 2.0).abs() < 1e-10);
        }
        let ts = r.t_star.unwrap();
        let eps = r.epsilon.unwrap();
        let (sup, gap) = decay_envelopes(&r, 10.0).unwrap();
        assert!((sup - 1.0 / (10.0 - ts - eps)).abs() < 1e-9);
        assert!((gap - 0.5 / (10.0 - ts).powi(2)).abs() < 1e-9);
        assert!(matches!(decay_envelopes(&r, ts), Err(Error::OutOfRange { .. })));
        assert!(matches!(extinction_curve(&TimeSeries::new(), &r.input, 0.0), Err(Error::EmptyTrace)));
    }

    #[test]
    fn rejects_non_convex_and_transport_fluxes() {
        assert!(OracleInput::new(FluxModel::linear(2.0), 1.25, 1.0, 0.25, 1.0, 1.0).is_err());
        let bl = FluxModel::buckley_leverett(0.25).unwrap();
        assert!(OracleInput::new(bl, 1.25, 1.0, 0.25, 1.0, 1.0).is_err());
    }
}
