//! Damped cubic Schrödinger equation
//! `i u_t + u_xx = -q |u|^2 u - i a(x) u/|u|^alpha` on a periodic interval,
//! split as dispersion(dt/2) phase(dt/2) damping(dt) phase(dt/2) dispersion(dt/2).

use num_complex::Complex64;

use crate::companions::spectral::SpectralWorkspace;
use crate::config::{InitialDatum, Model, RunConfig};
use crate::damping::{apply_complex, DampingProfile};
use crate::error::{Error, Result};
use crate::grid::{ComplexField, Grid1D};
use crate::record::RunRecord;

/// `sqrt(2k/q) sech(sqrt(k)(x - ct)) exp(i c/2 (x - ct)) exp(i (k + c^2/4) t)`.
pub fn soliton(x: f64, t: f64, c: f64, k: f64, q: f64) -> Complex64 {
    let y = x - c * t;
    let amp = (2.0 * k / q).sqrt() / (k.sqrt() * y).cosh();
    amp * Complex64::from_polar(1.0, 0.5 * c * y + (k + 0.25 * c * c) * t)
}

/// Soliton on a periodic domain: the copy whose center is nearest to `x`.
pub fn periodic_soliton(grid: &Grid1D, x: f64, t: f64, c: f64, k: f64, q: f64) -> Complex64 {
    let center = grid.wrap(c * t);
    let mut y = x - center;
    let l = grid.length();
    y -= l * (y / l).round();
    let amp = (2.0 * k / q).sqrt() / (k.sqrt() * y).cosh();
    amp * Complex64::from_polar(1.0, 0.5 * c * y + (k + 0.25 * c * c) * t)
}

/// Pointwise solution of `i u_t = -q |u|^2 u` after time `dt`.
pub fn nls_phase_step(field: &ComplexField, q: f64, dt: f64) -> ComplexField {
    let mut out = field.clone();
    phase_in_place(&mut out.values, q, dt);
    out.time += dt;
    out
}

fn phase_in_place(values: &mut [Complex64], q: f64, dt: f64) {
    if q == 0.0 {
        return;
    }
    for u in values.iter_mut() {
        let r = u.norm_sqr();
        if r != 0.0 {
            *u *= Complex64::from_polar(1.0, q * r * dt);
        }
    }
}

/// `sum |u_j|^2 dx` over points where `coeffs` is positive.
pub fn mass_on_support(values: &[Complex64], coeffs: &[f64], dx: f64) -> f64 {
    values
        .iter()
        .zip(coeffs)
        .filter(|(_, &a)| a > 0.0)
        .map(|(u, _)| u.norm_sqr())
        .sum::<f64>()
        * dx
}

#[derive(Clone, Debug)]
pub struct NlsSolver {
    pub q: f64,
    pub dt: f64,
    alpha: f64,
    coeffs: Vec<f64>,
    disp_half: Vec<Complex64>,
    workspace: SpectralWorkspace,
}

impl NlsSolver {
    pub fn new(grid: &Grid1D, q: f64, profile: &DampingProfile, dt: f64) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
        }
        let workspace = SpectralWorkspace::for_grid(grid)?;
        Ok(Self {
            q,
            dt,
            alpha: profile.alpha(),
            coeffs: profile.coefficients(grid),
            disp_half: workspace.dispersion_multipliers(0.5 * dt),
            workspace,
        })
    }

    pub fn from_config(config: &RunConfig) -> Result<Self> {
        Self::new(&config.grid()?, config.nls_q, &config.damping()?, config.dt)
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn step(&mut self, field: &mut ComplexField, step_index: usize) {
        let h = 0.5 * self.dt;
        self.workspace.apply_complex(&mut field.values, &self.disp_half);
        phase_in_place(&mut field.values, self.q, h);
        apply_complex(&mut field.values, &self.coeffs, self.alpha, self.dt);
        phase_in_place(&mut field.values, self.q, h);
        self.workspace.apply_complex(&mut field.values, &self.disp_half);
        field.time = step_index as f64 * self.dt;
    }
}

/// One split step from time `field.time`.
pub fn nls_split_step(
    field: &ComplexField,
    q: f64,
    profile: &DampingProfile,
    dt: f64,
) -> Result<ComplexField> {
    let mut s = NlsSolver::new(&field.grid, q, profile, dt)?;
    let mut out = field.clone();
    let t = field.time + dt;
    s.step(&mut out, 0);
    out.time = t;
    Ok(out)
}

pub fn initial_complex_field(config: &RunConfig) -> Result<ComplexField> {
    let grid = config.grid()?;
    let (c, k, q) = (config.nls_c, config.nls_k, config.nls_q);
    match config.initial {
        InitialDatum::Soliton => ComplexField::sample(grid, |x| soliton(x, 0.0, c, k, q)),
        _ => {
            let re = crate::run::initial_real_field(config, &grid)?;
            ComplexField::new(
                grid,
                0.0,
                re.values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
            )
        }
    }
}

pub fn run_nls(config: &RunConfig) -> Result<RunRecord> {
    run_nls_from(config, initial_complex_field(config)?)
}

pub fn run_nls_from(config: &RunConfig, mut field: ComplexField) -> Result<RunRecord> {
    if config.model != Model::Nls {
        return Err(Error::InvalidArgument(format!(
            "expected an nls config, got {}",
            config.model.as_str()
        )));
    }
    let mut solver = NlsSolver::from_config(config)?;
    let dx = field.grid.spacing();
    let mut rec = RunRecord::new(config.clone());
    let every = config.snapshot_every();
    let n_steps = config.n_steps();
    let record = |f: &ComplexField, rec: &mut RunRecord, coeffs: &[f64]| {
        rec.series_mut("mass").push(f.time, f.mass());
        rec.series_mut("mass_on_support")
            .push(f.time, mass_on_support(&f.values, coeffs, dx));
        rec.series_mut("sup_norm").push(f.time, f.sup_norm());
    };
    record(&field, &mut rec, &solver.coeffs);
    rec.complex_snapshots.push(field.clone());
    for n in 1..=n_steps {
        solver.step(&mut field, n);
        record(&field, &mut rec, &solver.coeffs);
        if n % every == 0 || n == n_steps {
            rec.complex_snapshots.push(field.clone());
        }
    }
    Ok(rec)
}
