//! Initial data and the per-model run dispatcher.

use std::f64::consts::PI;

use crate::companions::nls::run_nls;
use crate::companions::viscous::run_viscous;
use crate::companions::wave::run_wave;
use crate::config::{plateau_datum, InitialDatum, Model, RunConfig};
use crate::error::{Error, Result};
use crate::grid::{Grid1D, RealField};
use crate::hyperbolic::run_conservation;
use crate::record::RunRecord;

/// Samples the configured real initial datum on `grid`.
pub fn initial_real_field(config: &RunConfig, grid: &Grid1D) -> Result<RealField> {
    let (o, l) = (config.origin, config.length);
    match config.initial {
        InitialDatum::Zero => Ok(RealField::zeros(*grid, 0.0)),
        InitialDatum::Constant { value } => RealField::sample(*grid, |_| value),
        InitialDatum::Sine { mean, amplitude } => {
            RealField::sample(*grid, |x| mean + amplitude * (2.0 * PI * (x - o) / l).sin())
        }
        InitialDatum::Riemann { left, right, split } => {
            RealField::sample(*grid, |x| if x < split { left } else { right })
        }
        InitialDatum::Plateau { value } => {
            RealField::sample(*grid, |x| plateau_datum(value, (x - o) / l))
        }
        InitialDatum::Soliton => Err(Error::InvalidArgument(
            "the soliton datum is complex and only fits the nls model".into(),
        )),
    }
}

/// Runs any model.
pub fn run(config: &RunConfig) -> Result<RunRecord> {
    config.validate()?;
    match config.model {
        Model::Conservation => run_conservation(config),
        Model::Viscous => run_viscous(config),
        Model::Wave => run_wave(config),
        Model::Nls => run_nls(config),
    }
}
