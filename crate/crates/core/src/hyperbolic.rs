//! Rusanov finite volumes for `u_t + f(u)_x = 0` on the torus, composed
//! with the exact damping flow by Strang splitting.

use crate::analysis::{interval_cells, zero_gap_on};
use crate::config::{CflPolicy, Model, RunConfig, SplittingOrder};
use crate::damping::{apply_real, DampingProfile, Interval};
use crate::error::{Error, Result};
use crate::flux::FluxModel;
use crate::grid::{Grid1D, RealField, Topology};
use crate::record::RunRecord;
use crate::run::initial_real_field;

/// Sup-norm below which a field counts as extinct.
pub const EXTINCTION_THRESHOLD: f64 = 1e-12;

/// `|f(b) - f(a)| / |b - a|`, zero when the states coincide.
#[inline]
fn secant_speed(fa: f64, fb: f64, a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        ((fb - fa) / (b - a)).abs()
    }
}

/// Viscosity coefficient of one interface. The endpoint speeds alone can
/// undershoot the secant slope of a non-convex flux, which breaks the
/// maximum principle, so the secant is included.
#[inline]
fn interface_speed(sa: f64, sb: f64, fa: f64, fb: f64, a: f64, b: f64) -> f64 {
    let s = sa.max(sb);
    let sec = secant_speed(fa, fb, a, b);
    if sec > s {
        sec
    } else {
        s
    }
}

#[inline]
pub fn rusanov_flux(flux: &FluxModel, ul: f64, ur: f64) -> f64 {
    let (fl, fr) = (flux.f(ul), flux.f(ur));
    let speed = interface_speed(flux.df(ul).abs(), flux.df(ur).abs(), fl, fr, ul, ur);
    0.5 * (fl + fr) - 0.5 * speed * (ur - ul)
}

/// How advection steps are cut into individual Rusanov updates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdvectionControl {
    pub policy: CflPolicy,
    pub cfl_max: f64,
    pub max_substep: Option<f64>,
}

impl Default for AdvectionControl {
    fn default() -> Self {
        Self {
            policy: CflPolicy::Enforce,
            cfl_max: 0.9,
            max_substep: None,
        }
    }
}

impl AdvectionControl {
    pub fn from_config(config: &RunConfig) -> Self {
        Self {
            policy: config.cfl_policy,
            cfl_max: config.cfl_max,
            max_substep: config.advection_max_substep,
        }
    }
}

/// Reusable buffers for the Rusanov update.
#[derive(Clone, Debug, Default)]
pub struct Advector {
    f: Vec<f64>,
    s: Vec<f64>,
    interface: Vec<f64>,
}

impl Advector {
    pub fn new() -> Self {
        Self::default()
    }

    /// Largest interface viscosity: `|f'(u_j)|` or a neighbouring secant slope.
    pub fn max_speed(flux: &FluxModel, values: &[f64]) -> f64 {
        let n = values.len();
        let mut m = 0.0_f64;
        for j in 0..n {
            let (a, b) = (values[j], values[(j + 1) % n]);
            let sa = flux.df(a).abs();
            m = m.max(sa).max(secant_speed(flux.f(a), flux.f(b), a, b));
        }
        m
    }

    /// One conservative update with periodic wrap. Returns the Courant number.
    pub fn euler_step(&mut self, flux: &FluxModel, values: &mut [f64], dt: f64, dx: f64) -> f64 {
        let n = values.len();
        self.f.clear();
        self.s.clear();
        self.interface.clear();
        let mut smax = 0.0_f64;
        for &u in values.iter() {
            self.f.push(flux.f(u));
            self.s.push(flux.df(u).abs());
        }
        // interface[j] holds F_{j+1/2}
        for j in 0..n {
            let k = if j + 1 == n { 0 } else { j + 1 };
            let speed = interface_speed(
                self.s[j],
                self.s[k],
                self.f[j],
                self.f[k],
                values[j],
                values[k],
            );
            smax = smax.max(speed);
            self.interface
                .push(0.5 * (self.f[j] + self.f[k]) - 0.5 * speed * (values[k] - values[j]));
        }
        let r = dt / dx;
        let mut left = self.interface[n - 1];
        for (u, &right) in values.iter_mut().zip(&self.interface) {
            *u -= r * (right - left);
            left = right;
        }
        smax * r
    }

    /// Advances by `dt`, splitting into sub-steps as the control requires.
    /// Returns `(substeps, max courant)`.
    pub fn advect(
        &mut self,
        flux: &FluxModel,
        values: &mut [f64],
        dt: f64,
        dx: f64,
        control: &AdvectionControl,
    ) -> Result<(usize, f64)> {
        if dt == 0.0 {
            return Ok((0, 0.0));
        }
        if let Some(h) = control.max_substep {
            // fixed sub-steps: every call with the same h applies the same map
            let k = ((dt / h) - 1e-9).ceil().max(1.0) as usize;
            let sub = dt / k as f64;
            let mut cmax = 0.0_f64;
            for _ in 0..k {
                let speed = Self::max_speed(flux, values);
                let courant = sub * speed / dx;
                if control.policy == CflPolicy::Enforce && courant > control.cfl_max {
                    return Err(Error::CflViolation {
                        courant,
                        limit: control.cfl_max,
                    });
                }
                cmax = cmax.max(self.euler_step(flux, values, sub, dx));
            }
            return Ok((k, cmax));
        }
        match control.policy {
            CflPolicy::ReplicatePaper => {
                let c = self.euler_step(flux, values, dt, dx);
                Ok((1, c))
            }
            CflPolicy::Enforce => {
                let mut remaining = dt;
                let mut count = 0;
                let mut cmax = 0.0_f64;
                while remaining > 0.0 {
                    let speed = Self::max_speed(flux, values);
                    let limit = if speed > 0.0 {
                        control.cfl_max * dx / speed
                    } else {
                        f64::INFINITY
                    };
                    let sub = if limit >= remaining {
                        remaining
                    } else {
                        // equal pieces so the last one is not a sliver
                        let k = (remaining / limit).ceil();
                        remaining / k
                    };
                    cmax = cmax.max(self.euler_step(flux, values, sub, dx));
                    count += 1;
                    remaining = if sub == remaining { 0.0 } else { remaining - sub };
                }
                Ok((count, cmax))
            }
        }
    }
}

fn check_periodic(grid: &Grid1D) -> Result<()> {
    if grid.topology() != Topology::Periodic {
        return Err(Error::InvalidArgument(
            "finite-volume advection needs a periodic grid".into(),
        ));
    }
    Ok(())
}

/// A single Rusanov update over `dt`. Under the enforce policy a Courant
/// number above `cfl_max` is an error.
pub fn hyperbolic_step(
    field: &RealField,
    flux: &FluxModel,
    dt: f64,
    policy: CflPolicy,
    cfl_max: f64,
) -> Result<RealField> {
    check_periodic(&field.grid)?;
    if !(dt > 0.0) {
        return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
    }
    let dx = field.grid.spacing();
    let courant = dt * Advector::max_speed(flux, &field.values) / dx;
    if policy == CflPolicy::Enforce && courant > cfl_max {
        return Err(Error::CflViolation {
            courant,
            limit: cfl_max,
        });
    }
    let mut out = field.clone();
    Advector::new().euler_step(flux, &mut out.values, dt, dx);
    out.time += dt;
    Ok(out)
}

/// Running diagnostics of a solver.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct StepDiagnostics {
    pub max_courant: f64,
    pub advection_substeps: usize,
}

#[derive(Clone, Debug)]
pub struct SolverState {
    pub field: RealField,
    pub step: usize,
    pub diagnostics: StepDiagnostics,
}

impl SolverState {
    pub fn new(field: RealField) -> Self {
        Self {
            field,
            step: 0,
            diagnostics: StepDiagnostics::default(),
        }
    }
}

/// Strang splitting of advection and exact damping.
#[derive(Clone, Debug)]
pub struct StrangSolver {
    pub flux: FluxModel,
    pub dt: f64,
    pub order: SplittingOrder,
    pub control: AdvectionControl,
    alpha: f64,
    coeffs: Vec<f64>,
    dx: f64,
    advector: Advector,
}

impl StrangSolver {
    pub fn new(
        grid: &Grid1D,
        flux: FluxModel,
        profile: &DampingProfile,
        dt: f64,
        order: SplittingOrder,
        control: AdvectionControl,
    ) -> Result<Self> {
        check_periodic(grid)?;
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
        }
        Ok(Self {
            flux,
            dt,
            order,
            control,
            alpha: profile.alpha(),
            coeffs: profile.coefficients(grid),
            dx: grid.spacing(),
            advector: Advector::new(),
        })
    }

    pub fn from_config(config: &RunConfig) -> Result<Self> {
        Self::new(
            &config.grid()?,
            config.flux.clone(),
            &config.damping()?,
            config.dt,
            config.splitting,
            AdvectionControl::from_config(config),
        )
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    fn advect(&mut self, values: &mut [f64], dt: f64, diag: &mut StepDiagnostics) -> Result<()> {
        let (k, c) = self
            .advector
            .advect(&self.flux, values, dt, self.dx, &self.control)?;
        diag.advection_substeps += k;
        diag.max_courant = diag.max_courant.max(c);
        Ok(())
    }

    pub fn strang_step(&mut self, state: &mut SolverState) -> Result<()> {
        let dt = self.dt;
        let values = &mut state.field.values;
        match self.order {
            SplittingOrder::Bab => {
                apply_real(values, &self.coeffs, self.alpha, 0.5 * dt);
                self.advect(values, dt, &mut state.diagnostics)?;
                apply_real(values, &self.coeffs, self.alpha, 0.5 * dt);
            }
            SplittingOrder::Aba => {
                self.advect(values, 0.5 * dt, &mut state.diagnostics)?;
                apply_real(values, &self.coeffs, self.alpha, dt);
                self.advect(values, 0.5 * dt, &mut state.diagnostics)?;
            }
        }
        state.step += 1;
        state.field.time = state.step as f64 * dt;
        Ok(())
    }
}

/// Index of the cell immediately to the left of the point `x` on a periodic grid.
pub fn cell_left_of(grid: &Grid1D, x: f64) -> usize {
    let n = grid.n_cells() as i64;
    let k = ((x - grid.origin()) / grid.spacing()).round() as i64 - 1;
    k.rem_euclid(n) as usize
}

/// Per-step series recorded by the conservation and viscous runs.
#[derive(Clone, Debug)]
pub struct SeriesProbe {
    interval: Interval,
    cells: Vec<usize>,
    left: usize,
    right: usize,
}

impl SeriesProbe {
    pub fn new(grid: &Grid1D, interval: Interval) -> Self {
        Self {
            interval,
            cells: interval_cells(grid, interval),
            left: cell_left_of(grid, interval.start),
            right: cell_left_of(grid, interval.end()),
        }
    }

    pub fn record(&self, field: &RealField, rec: &mut RunRecord) {
        let t = field.time;
        rec.series_mut("sup_norm").push(t, field.sup_norm());
        rec.series_mut("l1_norm").push(t, field.l1_norm());
        rec.series_mut("zero_gap")
            .push(t, zero_gap_on(field, self.interval.length, &self.cells));
        rec.series_mut("trace_x0").push(t, field.values[self.left]);
        rec.series_mut("trace_xA").push(t, field.values[self.right]);
    }
}

/// Runs a conservation-law config from its own initial datum.
pub fn run_conservation(config: &RunConfig) -> Result<RunRecord> {
    let grid = config.grid()?;
    let initial = initial_real_field(config, &grid)?;
    run_conservation_from(config, initial, |_| {})
}

/// Runs from an explicit initial field, calling `observe` after every step.
pub fn run_conservation_from(
    config: &RunConfig,
    initial: RealField,
    mut observe: impl FnMut(&RealField),
) -> Result<RunRecord> {
    if config.model != Model::Conservation {
        return Err(Error::InvalidArgument(format!(
            "expected a conservation config, got {}",
            config.model.as_str()
        )));
    }
    let grid = config.grid()?;
    if initial.grid != grid {
        return Err(Error::MismatchedGrids("initial field and config grid differ".into()));
    }
    let mut solver = StrangSolver::from_config(config)?;
    let probe = SeriesProbe::new(&grid, config.primary_interval());
    let mut rec = RunRecord::new(config.clone());
    let mut state = SolverState::new(initial);
    let every = config.snapshot_every();
    let n_steps = config.n_steps();

    probe.record(&state.field, &mut rec);
    rec.push_snapshot("u", state.field.clone());
    for _ in 0..n_steps {
        solver.strang_step(&mut state)?;
        probe.record(&state.field, &mut rec);
        observe(&state.field);
        if state.step.is_multiple_of(every) || state.step == n_steps {
            rec.push_snapshot("u", state.field.clone());
        }
    }
    rec.notes.insert(
        "max_courant".into(),
        format!("{}", state.diagnostics.max_courant),
    );
    rec.notes.insert(
        "advection_substeps".into(),
        state.diagnostics.advection_substeps.to_string(),
    );
    Ok(rec)
}
