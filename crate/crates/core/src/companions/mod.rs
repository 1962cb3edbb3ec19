//! Companion models built from exact sub-flows: viscous Burgers, the
//! damped wave equation and the damped cubic Schrödinger equation.

pub mod nls;
pub mod spectral;
pub mod viscous;
pub mod wave;

pub use nls::run_nls;
pub use viscous::run_viscous;
pub use wave::run_wave;

pub use nls::{nls_phase_step, soliton, NlsSolver};
pub use spectral::{spectral_diffusion_step, SpectralWorkspace};
pub use viscous::ViscousSolver;
pub use wave::{newmark_step, wave_energy, wave_split_step, WaveState};
