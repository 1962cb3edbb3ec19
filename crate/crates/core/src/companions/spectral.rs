//! FFT-based multipliers on periodic grids.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::{Grid1D, RealField, Topology};

/// FFT plans and wavenumbers `xi_m = 2 pi m / L` in FFT storage order.
#[derive(Clone)]
pub struct SpectralWorkspace {
    n: usize,
    xi: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    buf: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl std::fmt::Debug for SpectralWorkspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralWorkspace").field("n", &self.n).finish()
    }
}

impl SpectralWorkspace {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "spectral grids need a power-of-two size, got {n}"
            )));
        }
        if !(length > 0.0) {
            return Err(Error::InvalidArgument(format!("length must be positive, got {length}")));
        }
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let scratch_len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        let xi = (0..n)
            .map(|m| {
                // m = n/2 is stored as -n/2
                let k = if m < n / 2 { m as f64 } else { m as f64 - n as f64 };
                2.0 * PI * k / length
            })
            .collect();
        Ok(Self {
            n,
            xi,
            forward,
            inverse,
            buf: vec![Complex64::new(0.0, 0.0); n],
            scratch: vec![Complex64::new(0.0, 0.0); scratch_len],
        })
    }

    pub fn for_grid(grid: &Grid1D) -> Result<Self> {
        if grid.topology() != Topology::Periodic {
            return Err(Error::InvalidArgument("spectral steps need a periodic grid".into()));
        }
        Self::new(grid.n_cells(), grid.length())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Wavenumbers in FFT storage order.
    pub fn wavenumbers(&self) -> &[f64] {
        &self.xi
    }

    /// Unnormalized forward transform in place.
    pub fn forward(&mut self, data: &mut [Complex64]) {
        self.forward.process_with_scratch(data, &mut self.scratch);
    }

    /// Normalized inverse transform in place.
    pub fn inverse(&mut self, data: &mut [Complex64]) {
        self.inverse.process_with_scratch(data, &mut self.scratch);
        let s = 1.0 / self.n as f64;
        for v in data.iter_mut() {
            *v *= s;
        }
    }

    /// Multiplies every mode of a complex vector by `mult[m]`.
    pub fn apply_complex(&mut self, values: &mut [Complex64], mult: &[Complex64]) {
        assert_eq!(values.len(), self.n);
        self.forward(values);
        for (v, m) in values.iter_mut().zip(mult) {
            *v *= m;
        }
        self.inverse(values);
    }

    /// Multiplies every mode of a real vector by the real symbol `mult[m]`.
    /// Symbols are even in `xi`, so the result is real up to rounding and the
    /// imaginary part is dropped.
    pub fn apply_real(&mut self, values: &mut [f64], mult: &[f64]) {
        assert_eq!(values.len(), self.n);
        let mut buf = std::mem::take(&mut self.buf);
        for (b, &v) in buf.iter_mut().zip(values.iter()) {
            *b = Complex64::new(v, 0.0);
        }
        self.forward(&mut buf);
        for (b, &m) in buf.iter_mut().zip(mult) {
            *b *= m;
        }
        self.inverse(&mut buf);
        for (v, b) in values.iter_mut().zip(&buf) {
            *v = b.re;
        }
        self.buf = buf;
    }

    /// Heat-flow symbols `exp(-mu xi^2 dt)`.
    pub fn heat_multipliers(&self, mu: f64, dt: f64) -> Vec<f64> {
        self.xi.iter().map(|x| (-mu * x * x * dt).exp()).collect()
    }

    /// Free Schrödinger symbols `exp(-i xi^2 dt)`.
    pub fn dispersion_multipliers(&self, dt: f64) -> Vec<Complex64> {
        self.xi
            .iter()
            .map(|x| Complex64::from_polar(1.0, -x * x * dt))
            .collect()
    }
}

/// Exact semi-discrete heat flow `w_t = mu w_xx` over `dt`.
pub fn spectral_diffusion_step(
    field: &RealField,
    mu: f64,
    dt: f64,
    workspace: &mut SpectralWorkspace,
) -> Result<RealField> {
    if !(mu >= 0.0) || !(dt >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "need mu >= 0 and dt >= 0, got mu={mu}, dt={dt}"
        )));
    }
    if workspace.len() != field.values.len() {
        return Err(Error::MismatchedGrids(format!(
            "workspace has {} modes, field has {} values",
            workspace.len(),
            field.values.len()
        )));
    }
    let mut out = field.clone();
    out.time += dt;
    if mu == 0.0 || dt == 0.0 {
        return Ok(out);
    }
    let mult = workspace.heat_multipliers(mu, dt);
    workspace.apply_real(&mut out.values, &mult);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wavenumbers_unit_torus() {
        let ws = SpectralWorkspace::new(8, 1.0).unwrap();
        let want = [0.0, 1.0, 2.0, 3.0, -4.0, -3.0, -2.0, -1.0];
        for (x, k) in ws.wavenumbers().iter().zip(want) {
            assert!((x - 2.0 * PI * k).abs() < 1e-14);
        }
        assert!(SpectralWorkspace::new(12, 1.0).is_err());
    }

    #[test]
    fn round_trip() {
        let mut ws = SpectralWorkspace::new(64, 20.0).unwrap();
        let orig: Vec<Complex64> = (0..64)
            .map(|j| Complex64::new((j as f64 * 0.37).sin(), (j as f64).cos()))
            .collect();
        let mut v = orig.clone();
        ws.forward(&mut v);
        ws.inverse(&mut v);
        let norm: f64 = orig.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let err: f64 = v.iter().zip(&orig).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
        assert!(err <= 1e-12 * norm);
    }

    #[test]
    fn heat_on_pure_mode() {
        let grid = Grid1D::periodic(64, 1.0, 0.0).unwrap();
        let u = RealField::sample(grid, |x| (2.0 * PI * x).sin()).unwrap();
        let mut ws = SpectralWorkspace::for_grid(&u.grid).unwrap();
        let (mu, dt) = (0.01, 0.3);
        let v = spectral_diffusion_step(&u, mu, dt, &mut ws).unwrap();
        let damp = (-4.0 * PI * PI * mu * dt).exp();
        for (a, b) in v.values.iter().zip(&u.values) {
            assert!((a - damp * b).abs() < 1e-14);
        }
    }

    #[test]
    fn heat_identity_cases() {
        let grid = Grid1D::periodic(32, 1.0, 0.0).unwrap();
        let mut ws = SpectralWorkspace::for_grid(&grid).unwrap();
        let c = RealField::sample(grid, |_| 0.7).unwrap();
        let v = spectral_diffusion_step(&c, 0.5, 1.0, &mut ws).unwrap();
        for x in &v.values {
            assert!((x - 0.7).abs() < 1e-15);
        }
        let u = RealField::sample(grid, |x| x * x).unwrap();
        assert_eq!(spectral_diffusion_step(&u, 0.0, 1.0, &mut ws).unwrap().values, u.values);
        let w = spectral_diffusion_step(&u, 0.1, 1.0, &mut ws).unwrap();
        assert!((w.mass() - u.mass()).abs() < 1e-14);
    }

    #[test]
    fn multipliers_bounded() {
        let ws = SpectralWorkspace::new(128, 1.0).unwrap();
        let m = ws.heat_multipliers(0.01, 0.1);
        assert_eq!(m[0], 1.0);
        assert!(m.iter().all(|&x| x > 0.0 && x <= 1.0));
    }
}
