//! Damped wave equation `u_tt - c^2 u_xx = -a(x) u_t/|u_t|^alpha` on `(0, L)`
//! with homogeneous Dirichlet ends: Newmark for the free part, exact damping
//! on the velocity, Strang composition.

use crate::companions::viscous::sup_on_support;
use crate::config::{plateau_datum, InitialDatum, Model, RunConfig};
use crate::damping::{apply_real, DampingProfile};
use crate::error::{Error, Result};
use crate::grid::{Grid1D, RealField, Topology};
use crate::record::RunRecord;

#[derive(Clone, Debug, PartialEq)]
pub struct WaveState {
    /// Displacement on Dirichlet nodes.
    pub u: RealField,
    /// Velocity on the same nodes.
    pub v: RealField,
    pub c: f64,
    pub theta: f64,
    pub zeta: f64,
}

impl WaveState {
    pub fn new(u: RealField, v: RealField, c: f64, theta: f64, zeta: f64) -> Result<Self> {
        if u.grid.topology() != Topology::Dirichlet || u.grid != v.grid {
            return Err(Error::MismatchedGrids(
                "wave state needs u and v on one Dirichlet grid".into(),
            ));
        }
        if !(c > 0.0) {
            return Err(Error::InvalidArgument(format!("wave speed must be positive, got {c}")));
        }
        let mut s = Self { u, v, c, theta, zeta };
        s.pin_boundary();
        Ok(s)
    }

    fn pin_boundary(&mut self) {
        let n = self.u.values.len();
        for i in [0, n - 1] {
            self.u.values[i] = 0.0;
            self.v.values[i] = 0.0;
        }
    }

    pub fn time(&self) -> f64 {
        self.u.time
    }
}

/// Second difference with zero at the boundary nodes.
fn second_difference(u: &[f64], dx: f64, out: &mut Vec<f64>) {
    let n = u.len();
    out.clear();
    out.resize(n, 0.0);
    let s = 1.0 / (dx * dx);
    for j in 1..n - 1 {
        out[j] = (u[j + 1] - 2.0 * u[j] + u[j - 1]) * s;
    }
}

/// Solves the constant-coefficient tridiagonal system with `diag` on the
/// diagonal and `off` on both off-diagonals, overwriting `rhs`.
fn thomas_constant(diag: f64, off: f64, rhs: &mut [f64], work: &mut Vec<f64>) -> Result<()> {
    let m = rhs.len();
    if m == 0 {
        return Ok(());
    }
    work.clear();
    work.resize(m, 0.0);
    let mut denom = diag;
    if denom == 0.0 {
        return Err(Error::SingularSystem(0));
    }
    work[0] = off / denom;
    rhs[0] /= denom;
    for i in 1..m {
        denom = diag - off * work[i - 1];
        if denom == 0.0 || !denom.is_finite() {
            return Err(Error::SingularSystem(i));
        }
        work[i] = off / denom;
        rhs[i] = (rhs[i] - off * rhs[i - 1]) / denom;
    }
    for i in (0..m - 1).rev() {
        rhs[i] -= work[i] * rhs[i + 1];
    }
    Ok(())
}

#[derive(Clone, Debug, Default)]
struct NewmarkBuffers {
    w0: Vec<f64>,
    w1: Vec<f64>,
    work: Vec<f64>,
}

fn newmark_in_place(s: &mut WaveState, dt: f64, buf: &mut NewmarkBuffers) -> Result<()> {
    if !(dt > 0.0) {
        return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
    }
    let dx = s.u.grid.spacing();
    let n = s.u.values.len();
    let c2 = s.c * s.c;
    second_difference(&s.u.values, dx, &mut buf.w0);

    // (I - zeta c^2 dt^2 D2) u1 = u0 + dt v0 + (1/2 - zeta) c^2 dt^2 w0 on interior nodes
    let r = s.zeta * c2 * dt * dt / (dx * dx);
    let mut rhs: Vec<f64> = (1..n - 1)
        .map(|j| s.u.values[j] + dt * s.v.values[j] + (0.5 - s.zeta) * c2 * dt * dt * buf.w0[j])
        .collect();
    thomas_constant(1.0 + 2.0 * r, -r, &mut rhs, &mut buf.work)?;
    s.u.values[1..n - 1].copy_from_slice(&rhs);

    second_difference(&s.u.values, dx, &mut buf.w1);
    for j in 1..n - 1 {
        s.v.values[j] += dt * c2 * ((1.0 - s.theta) * buf.w0[j] + s.theta * buf.w1[j]);
    }
    s.u.time += dt;
    s.v.time += dt;
    Ok(())
}

/// One Newmark step of the free wave equation.
pub fn newmark_step(state: &WaveState, dt: f64) -> Result<WaveState> {
    let mut s = state.clone();
    newmark_in_place(&mut s, dt, &mut NewmarkBuffers::default())?;
    Ok(s)
}

/// Damping on `v` for `dt/2`, Newmark for `dt`, damping for `dt/2`.
pub fn wave_split_step(state: &WaveState, profile: &DampingProfile, dt: f64) -> Result<WaveState> {
    let coeffs = profile.coefficients(&state.u.grid);
    let mut s = state.clone();
    apply_real(&mut s.v.values, &coeffs, profile.alpha(), 0.5 * dt);
    newmark_in_place(&mut s, dt, &mut NewmarkBuffers::default())?;
    apply_real(&mut s.v.values, &coeffs, profile.alpha(), 0.5 * dt);
    Ok(s)
}

/// Discrete energy `sum v_j^2 dx + c^2 sum ((u_{j+1} - u_j)/dx)^2 dx`.
pub fn wave_energy(state: &WaveState) -> f64 {
    let dx = state.u.grid.spacing();
    let kin: f64 = state.v.values.iter().map(|v| v * v).sum::<f64>() * dx;
    let pot: f64 = state
        .u
        .values
        .windows(2)
        .map(|w| {
            let d = (w[1] - w[0]) / dx;
            d * d
        })
        .sum::<f64>()
        * dx;
    kin + state.c * state.c * pot
}

/// Split-step driver with cached coefficients.
#[derive(Clone, Debug)]
pub struct WaveSolver {
    pub dt: f64,
    alpha: f64,
    coeffs: Vec<f64>,
    buf: NewmarkBuffers,
}

impl WaveSolver {
    pub fn new(grid: &Grid1D, profile: &DampingProfile, dt: f64) -> Self {
        Self {
            dt,
            alpha: profile.alpha(),
            coeffs: profile.coefficients(grid),
            buf: NewmarkBuffers::default(),
        }
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn step(&mut self, s: &mut WaveState, step_index: usize) -> Result<()> {
        apply_real(&mut s.v.values, &self.coeffs, self.alpha, 0.5 * self.dt);
        newmark_in_place(s, self.dt, &mut self.buf)?;
        apply_real(&mut s.v.values, &self.coeffs, self.alpha, 0.5 * self.dt);
        let t = step_index as f64 * self.dt;
        s.u.time = t;
        s.v.time = t;
        Ok(())
    }
}

/// Initial displacement from the config, zero at both ends.
pub fn initial_wave_state(config: &RunConfig) -> Result<WaveState> {
    let grid = config.grid()?;
    let u = match config.initial {
        InitialDatum::Plateau { value } => {
            let (o, l) = (config.origin, config.length);
            RealField::sample(grid, |x| plateau_datum(value, (x - o) / l))?
        }
        _ => crate::run::initial_real_field(config, &grid)?,
    };
    let v = RealField::zeros(grid, 0.0);
    WaveState::new(u, v, config.wave_c, config.theta, config.zeta)
}

pub fn run_wave(config: &RunConfig) -> Result<RunRecord> {
    run_wave_from(config, initial_wave_state(config)?)
}

pub fn run_wave_from(config: &RunConfig, mut state: WaveState) -> Result<RunRecord> {
    if config.model != Model::Wave {
        return Err(Error::InvalidArgument(format!(
            "expected a wave config, got {}",
            config.model.as_str()
        )));
    }
    let grid = config.grid()?;
    let mut solver = WaveSolver::new(&grid, &config.damping()?, config.dt);
    let mut rec = RunRecord::new(config.clone());
    let every = config.snapshot_every();
    let n_steps = config.n_steps();
    let record = |s: &WaveState, rec: &mut RunRecord, coeffs: &[f64]| {
        let t = s.time();
        rec.series_mut("sup_u").push(t, s.u.sup_norm());
        rec.series_mut("sup_v").push(t, s.v.sup_norm());
        rec.series_mut("sup_v_on_support")
            .push(t, sup_on_support(&s.v.values, coeffs));
        rec.series_mut("energy").push(t, wave_energy(s));
    };
    record(&state, &mut rec, &solver.coeffs);
    rec.push_snapshot("u", state.u.clone());
    rec.push_snapshot("v", state.v.clone());
    for n in 1..=n_steps {
        solver.step(&mut state, n)?;
        record(&state, &mut rec, &solver.coeffs);
        if n % every == 0 || n == n_steps {
            rec.push_snapshot("u", state.u.clone());
            rec.push_snapshot("v", state.v.clone());
        }
    }
    Ok(rec)
}
