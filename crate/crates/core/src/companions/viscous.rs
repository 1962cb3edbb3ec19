//! Viscous conservation law `u_t + f(u)_x = mu u_xx - a u/|u|^alpha` by the
//! three-operator splitting A(dt/2) B(dt/2) C(dt) B(dt/2) A(dt/2) with
//! A advection, B spectral diffusion and C exact damping.

use crate::companions::spectral::SpectralWorkspace;
use crate::config::{Model, RunConfig};
use crate::damping::{apply_real, DampingProfile};
use crate::error::{Error, Result};
use crate::flux::FluxModel;
use crate::grid::{Grid1D, RealField};
use crate::hyperbolic::{AdvectionControl, Advector, SeriesProbe, SolverState};
use crate::record::RunRecord;
use crate::run::initial_real_field;

#[derive(Debug, Clone)]
pub struct ViscousSolver {
    pub flux: FluxModel,
    pub mu: f64,
    pub dt: f64,
    pub control: AdvectionControl,
    alpha: f64,
    coeffs: Vec<f64>,
    dx: f64,
    heat_half: Vec<f64>,
    workspace: SpectralWorkspace,
    advector: Advector,
}

impl ViscousSolver {
    pub fn new(
        grid: &Grid1D,
        flux: FluxModel,
        mu: f64,
        profile: &DampingProfile,
        dt: f64,
        control: AdvectionControl,
    ) -> Result<Self> {
        if !(mu >= 0.0) {
            return Err(Error::InvalidArgument(format!("mu must be >= 0, got {mu}")));
        }
        if !(dt > 0.0) {
            return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
        }
        let workspace = SpectralWorkspace::for_grid(grid)?;
        Ok(Self {
            flux,
            mu,
            dt,
            control,
            alpha: profile.alpha(),
            coeffs: profile.coefficients(grid),
            dx: grid.spacing(),
            heat_half: workspace.heat_multipliers(mu, 0.5 * dt),
            workspace,
            advector: Advector::new(),
        })
    }

    pub fn from_config(config: &RunConfig) -> Result<Self> {
        Self::new(
            &config.grid()?,
            config.flux.clone(),
            config.mu,
            &config.damping()?,
            config.dt,
            AdvectionControl::from_config(config),
        )
    }

    fn advect_half(&mut self, state: &mut SolverState) -> Result<()> {
        let (k, c) = self.advector.advect(
            &self.flux,
            &mut state.field.values,
            0.5 * self.dt,
            self.dx,
            &self.control,
        )?;
        state.diagnostics.advection_substeps += k;
        state.diagnostics.max_courant = state.diagnostics.max_courant.max(c);
        Ok(())
    }

    fn diffuse_half(&mut self, values: &mut [f64]) {
        if self.mu > 0.0 {
            self.workspace.apply_real(values, &self.heat_half);
        }
    }

    pub fn step(&mut self, state: &mut SolverState) -> Result<()> {
        self.advect_half(state)?;
        self.diffuse_half(&mut state.field.values);
        apply_real(&mut state.field.values, &self.coeffs, self.alpha, self.dt);
        self.diffuse_half(&mut state.field.values);
        self.advect_half(state)?;
        state.step += 1;
        state.field.time = state.step as f64 * self.dt;
        Ok(())
    }
}

/// Max of `|u|` over cells where the damping is active.
pub fn sup_on_support(values: &[f64], coeffs: &[f64]) -> f64 {
    values
        .iter()
        .zip(coeffs)
        .filter(|(_, &a)| a > 0.0)
        .fold(0.0_f64, |m, (v, _)| m.max(v.abs()))
}

pub fn run_viscous(config: &RunConfig) -> Result<RunRecord> {
    let grid = config.grid()?;
    let initial = initial_real_field(config, &grid)?;
    run_viscous_from(config, initial)
}

pub fn run_viscous_from(config: &RunConfig, initial: RealField) -> Result<RunRecord> {
    if config.model != Model::Viscous {
        return Err(Error::InvalidArgument(format!(
            "expected a viscous config, got {}",
            config.model.as_str()
        )));
    }
    let grid = config.grid()?;
    let mut solver = ViscousSolver::from_config(config)?;
    let probe = SeriesProbe::new(&grid, config.primary_interval());
    let mut rec = RunRecord::new(config.clone());
    let mut state = SolverState::new(initial);
    let every = config.snapshot_every();
    let n_steps = config.n_steps();
    let record = |f: &RealField, rec: &mut RunRecord, coeffs: &[f64]| {
        probe.record(f, rec);
        rec.series_mut("sup_on_support")
            .push(f.time, sup_on_support(&f.values, coeffs));
    };
    record(&state.field, &mut rec, &solver.coeffs);
    rec.push_snapshot("u", state.field.clone());
    for _ in 0..n_steps {
        solver.step(&mut state)?;
        record(&state.field, &mut rec, &solver.coeffs);
        if state.step.is_multiple_of(every) || state.step == n_steps {
            rec.push_snapshot("u", state.field.clone());
        }
    }
    rec.notes.insert("max_courant".into(), format!("{}", state.diagnostics.max_courant));
    Ok(rec)
}
