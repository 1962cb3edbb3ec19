//! Bundled run configurations for the reference scenarios.
//!
//! Each preset is stored as config text, so it goes through the same parser
//! as user files. `checks` lists the diagnostics from [`crate::checks`] that
//! the run is expected to pass, at full resolution or coarsened.

use crate::config::{parse_config, RunConfig};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct Preset {
    pub name: &'static str,
    pub summary: &'static str,
    pub text: &'static str,
    pub checks: &'static [&'static str],
}

impl Preset {
    pub fn config(&self) -> Result<RunConfig> {
        parse_config(self.text)
    }

    /// Config with mesh size and time step scaled by `factor` (1 keeps it as is).
    pub fn coarse(&self, factor: usize) -> Result<RunConfig> {
        let c = self.config()?;
        if factor <= 1 {
            return Ok(c);
        }
        c.coarsen(factor)
    }
}

pub const FIG1_1: Preset = Preset {
    name: "fig1.1",
    summary: "linear transport f = 2u through a damped quarter, total extinction",
    text: "\
model = conservation
grid.n_cells = 20000
flux = linear
flux.c = 2
damping.delta = 1
damping.alpha = 1
damping.omega = 0,0.25
dt = 5e-5
t_final = 10
initial = constant
initial.value = 1.25
snapshot.interval = 0.1
",
    checks: &["extinction"],
};

pub const FIG5_1: Preset = Preset {
    name: "fig5.1",
    summary: "Burgers with damping on (0, 1/4): decay like 1/t, no total extinction",
    text: "\
model = conservation
grid.n_cells = 20000
flux = burgers
damping.delta = 1
damping.alpha = 1
damping.omega = 0,0.25
dt = 5e-5
t_final = 10
initial = constant
initial.value = 1.25
snapshot.interval = 0.1
",
    checks: &["persistence", "zero-set"],
};

pub const FIG6_1A: Preset = Preset {
    name: "fig6.1a",
    summary: "Buckley-Leverett k = 1/4, alpha = 3/4",
    text: "\
model = conservation
grid.n_cells = 20000
flux = buckley_leverett
flux.k = 0.25
damping.delta = 1
damping.alpha = 0.75
damping.omega = 0,0.25
dt = 1e-5
t_final = 10
initial = constant
initial.value = 1.25
snapshot.interval = 0.1
",
    checks: &["zero-set"],
};

pub const FIG6_1B: Preset = Preset {
    name: "fig6.1b",
    summary: "Buckley-Leverett k = 1/4, alpha = 1",
    text: "\
model = conservation
grid.n_cells = 20000
flux = buckley_leverett
flux.k = 0.25
damping.delta = 1
damping.alpha = 1
damping.omega = 0,0.25
dt = 1e-5
t_final = 10
initial = constant
initial.value = 1.25
snapshot.interval = 0.1
",
    checks: &["zero-set"],
};

pub const FIG6_3: Preset = Preset {
    name: "fig6.3",
    summary: "viscous Burgers, late decay along the first Dirichlet mode of the undamped part",
    text: "\
model = viscous
grid.n_cells = 16384
flux = burgers
viscous.mu = 0.01
damping.delta = 1
damping.alpha = 0.75
damping.omega = 0,0.25
dt = 1e-5
t_final = 40
initial = constant
initial.value = 1.25
snapshot.interval = 1
",
    checks: &["eigen-decay", "sine-profile"],
};

pub const FIG6_5: Preset = Preset {
    name: "fig6.5",
    summary: "damped wave equation with Dirichlet ends, damping on (3/8, 5/8)",
    text: "\
model = wave
grid.n_cells = 3000
wave.c = 0.1
wave.theta = 0.5
wave.zeta = 0.25
damping.delta = 1
damping.alpha = 1
damping.omega = 0.375,0.25
dt = 5e-4
t_final = 30
initial = plateau
initial.value = 1.25
snapshot.interval = 0.5
",
    checks: &["energy-decay"],
};

pub const FIG6_6: Preset = Preset {
    name: "fig6.6",
    summary: "free NLS soliton c = 20, k = 0.81 on (-10, 10)",
    text: "\
model = nls
grid.n_cells = 8192
grid.length = 20
grid.origin = -10
nls.q = 2
nls.k = 0.81
nls.c = 20
damping.delta = 0
damping.alpha = 1
damping.omega = everywhere
dt = 5e-4
t_final = 0.5
initial = soliton
snapshot.interval = 0.05
",
    checks: &["soliton", "mass-conservation"],
};

pub const FIG6_7: Preset = Preset {
    name: "fig6.7",
    summary: "NLS soliton running into damping on (-10, -6) and (6, 10)",
    text: "\
model = nls
grid.n_cells = 8192
grid.length = 20
grid.origin = -10
nls.q = 2
nls.k = 0.81
nls.c = 20
damping.delta = 1
damping.alpha = 1
damping.omega = -10,4;6,4
dt = 5e-4
t_final = 4
initial = soliton
snapshot.interval = 0.1
",
    checks: &["support-mass"],
};

pub const PROP1_7: Preset = Preset {
    name: "prop1.7",
    summary: "damping everywhere, constant datum: extinction exactly at |u0|^alpha/(alpha delta)",
    text: "\
model = conservation
grid.n_cells = 1000
flux = burgers
damping.delta = 1
damping.alpha = 1
damping.omega = everywhere
dt = 1e-3
t_final = 2
initial = constant
initial.value = 1.25
snapshot.interval = 0.1
",
    checks: &["extinction", "uniform-extinction"],
};

pub const ALL: &[Preset] = &[
    FIG1_1, FIG5_1, FIG6_1A, FIG6_1B, FIG6_3, FIG6_5, FIG6_6, FIG6_7, PROP1_7,
];

pub fn find(name: &str) -> Result<&'static Preset> {
    ALL.iter().find(|p| p.name == name).ok_or_else(|| {
        let names: Vec<&str> = ALL.iter().map(|p| p.name).collect();
        Error::InvalidArgument(format!(
            "unknown preset {name:?}; available: {}",
            names.join(", ")
        ))
    })
}
