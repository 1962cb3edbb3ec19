//! Scalar conservation laws on the torus with localized sublinear damping
//! `u_t + f(u)_x + a(x) u/|u|^alpha = 0`, together with companion viscous,
//! wave and Schrödinger models, characteristic tracing, a semi-analytic
//! oracle for constant data and the diagnostics used to check them.

// NaN must fail parameter validation, so `!(x > 0.0)` is intended.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod characteristics;
pub mod checks;
pub mod companions;
pub mod config;
pub mod damping;
pub mod error;
pub mod flux;
pub mod grid;
pub mod hyperbolic;
pub mod io;
pub mod oracle;
pub mod presets;
pub mod record;
pub mod run;

pub use config::{parse_config, Model, RunConfig};
pub use damping::DampingProfile;
pub use error::{Error, Result};
pub use flux::FluxModel;
pub use grid::{ComplexField, Grid1D, RealField, Topology};
pub use io::TimeSeries;
pub use record::RunRecord;
