//! Run configuration and its line-based `key = value` text format.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::damping::{check_alpha, DampingProfile, Interval, Support};
use crate::error::{Error, Result};
use crate::flux::FluxModel;
use crate::grid::{Grid1D, Topology};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    Conservation,
    Viscous,
    Wave,
    Nls,
}

impl Model {
    pub fn as_str(self) -> &'static str {
        match self {
            Model::Conservation => "conservation",
            Model::Viscous => "viscous",
            Model::Wave => "wave",
            Model::Nls => "nls",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "conservation" => Some(Model::Conservation),
            "viscous" => Some(Model::Viscous),
            "wave" => Some(Model::Wave),
            "nls" => Some(Model::Nls),
            _ => None,
        }
    }

    pub fn topology(self) -> Topology {
        match self {
            Model::Wave => Topology::Dirichlet,
            _ => Topology::Periodic,
        }
    }
}

/// How the advection operator deals with time steps above the CFL limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CflPolicy {
    /// Sub-step so that every advection update satisfies `courant <= cfl.max`.
    Enforce,
    /// Take the configured step as is.
    ReplicatePaper,
}

impl CflPolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            CflPolicy::Enforce => "enforce",
            CflPolicy::ReplicatePaper => "replicate-paper",
        }
    }
}

/// Strang composition order for the two-operator splitting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplittingOrder {
    /// damping(dt/2) advection(dt) damping(dt/2)
    Bab,
    /// advection(dt/2) damping(dt) advection(dt/2)
    Aba,
}

impl SplittingOrder {
    pub fn as_str(self) -> &'static str {
        match self {
            SplittingOrder::Bab => "BAB",
            SplittingOrder::Aba => "ABA",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum InitialDatum {
    Zero,
    Constant { value: f64 },
    /// `mean + amplitude sin(2 pi (x - origin) / L)`
    Sine { mean: f64, amplitude: f64 },
    /// `left` on `[origin, split)`, `right` elsewhere.
    Riemann { left: f64, right: f64, split: f64 },
    /// Plateau of height `value` on `[0.1, 0.9]` with exponential tails.
    Plateau { value: f64 },
    /// Traveling soliton built from the `nls.*` parameters.
    Soliton,
}

impl InitialDatum {
    pub fn id(&self) -> &'static str {
        match self {
            InitialDatum::Zero => "zero",
            InitialDatum::Constant { .. } => "constant",
            InitialDatum::Sine { .. } => "sine",
            InitialDatum::Riemann { .. } => "riemann",
            InitialDatum::Plateau { .. } => "plateau",
            InitialDatum::Soliton => "soliton",
        }
    }

    /// Sup-norm bound of the datum where it can be stated directly.
    pub fn amplitude(&self) -> Option<f64> {
        match *self {
            InitialDatum::Zero => Some(0.0),
            InitialDatum::Constant { value } | InitialDatum::Plateau { value } => Some(value.abs()),
            InitialDatum::Sine { mean, amplitude } => Some(mean.abs() + amplitude.abs()),
            InitialDatum::Riemann { left, right, .. } => Some(left.abs().max(right.abs())),
            InitialDatum::Soliton => None,
        }
    }
}

/// Plateau datum with exponential tails, evaluated verbatim.
pub fn plateau_datum(k: f64, x: f64) -> f64 {
    if x < 0.1 {
        k * (1.0 - (-0.1 / (0.1 - x)).exp())
    } else if x <= 0.9 {
        k
    } else {
        k * (1.0 - (-0.1 / (x - 0.9)).exp())
    }
}

/// Damping support as written in a config file.
#[derive(Clone, Debug, PartialEq)]
pub enum Omega {
    Everywhere,
    Intervals(Vec<Interval>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub model: Model,
    pub n_cells: usize,
    pub length: f64,
    pub origin: f64,
    pub flux: FluxModel,
    pub delta: f64,
    pub alpha: f64,
    pub omega: Omega,
    pub dt: f64,
    pub t_final: f64,
    pub initial: InitialDatum,
    pub mu: f64,
    pub wave_c: f64,
    pub theta: f64,
    pub zeta: f64,
    pub nls_q: f64,
    pub nls_k: f64,
    pub nls_c: f64,
    /// Time between stored snapshots.
    pub snapshot_interval: f64,
    pub cfl_policy: CflPolicy,
    pub cfl_max: f64,
    /// Upper bound on a single advection update, independent of the CFL limit.
    pub advection_max_substep: Option<f64>,
    pub splitting: SplittingOrder,
}

impl RunConfig {
    /// A conservation-law config on the unit torus with every optional key at its default.
    pub fn conservation(n_cells: usize, flux: FluxModel, initial: InitialDatum) -> Self {
        Self {
            model: Model::Conservation,
            n_cells,
            length: 1.0,
            origin: 0.0,
            flux,
            delta: 0.0,
            alpha: 1.0,
            omega: Omega::Everywhere,
            dt: 1.0 / n_cells as f64,
            t_final: 1.0,
            initial,
            mu: 0.01,
            wave_c: 0.1,
            theta: 0.5,
            zeta: 0.25,
            nls_q: 2.0,
            nls_k: 0.81,
            nls_c: 20.0,
            snapshot_interval: 0.1,
            cfl_policy: CflPolicy::Enforce,
            cfl_max: 0.9,
            advection_max_substep: None,
            splitting: SplittingOrder::Bab,
        }
    }

    pub fn grid(&self) -> Result<Grid1D> {
        Grid1D::new(self.n_cells, self.length, self.origin, self.model.topology())
    }

    pub fn damping(&self) -> Result<DampingProfile> {
        let support = match &self.omega {
            Omega::Everywhere => Support::Everywhere,
            Omega::Intervals(iv) => Support::Intervals(iv.clone()),
        };
        let p = DampingProfile::new(self.delta, support, self.alpha)?;
        Ok(p.on_grid(&self.grid()?))
    }

    /// First damping interval, or the whole domain.
    pub fn primary_interval(&self) -> Interval {
        match &self.omega {
            Omega::Everywhere => Interval::new(self.origin, self.length),
            Omega::Intervals(iv) => iv[0],
        }
    }

    pub fn n_steps(&self) -> usize {
        (self.t_final / self.dt - 1e-9).ceil().max(0.0) as usize
    }

    /// Steps between snapshots.
    pub fn snapshot_every(&self) -> usize {
        ((self.snapshot_interval / self.dt).round() as usize).max(1)
    }

    /// Scales mesh size and time step by `factor`.
    pub fn coarsen(&self, factor: usize) -> Result<Self> {
        if factor == 0 {
            return Err(Error::InvalidArgument("coarsening factor must be positive".into()));
        }
        if !self.n_cells.is_multiple_of(factor) || self.n_cells / factor < 2 {
            return Err(Error::InvalidArgument(format!(
                "{} cells cannot be coarsened by {factor}",
                self.n_cells
            )));
        }
        let mut c = self.clone();
        c.n_cells /= factor;
        c.dt *= factor as f64;
        if let Some(s) = c.advection_max_substep.as_mut() {
            *s *= factor as f64;
        }
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if self.n_cells < 2 {
            problems.push(format!("grid.n_cells must be >= 2 (got {})", self.n_cells));
        }
        if !(self.length > 0.0) {
            problems.push(format!("grid.length must be positive (got {})", self.length));
        }
        if check_alpha(self.alpha).is_err() {
            problems.push(format!("damping.alpha must lie in (0, 1] (got {})", self.alpha));
        }
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            problems.push(format!("damping.delta must be >= 0 (got {})", self.delta));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            problems.push(format!("dt must be positive (got {})", self.dt));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            problems.push(format!("t_final must be positive (got {})", self.t_final));
        }
        if !(self.snapshot_interval > 0.0) {
            problems.push("snapshot.interval must be positive".to_string());
        }
        if !(self.cfl_max > 0.0) {
            problems.push("cfl.max must be positive".to_string());
        }
        if let Some(s) = self.advection_max_substep {
            if !(s > 0.0) {
                problems.push("advection.max_substep must be positive".to_string());
            }
        }
        if let Omega::Intervals(iv) = &self.omega {
            let tol = 1e-12 * self.length;
            for i in iv {
                if !(i.length > 0.0) {
                    problems.push(format!("damping interval {i:?} has non-positive length"));
                }
                if i.start < self.origin - tol || i.end() > self.origin + self.length + tol {
                    problems.push(format!(
                        "damping interval ({}, {}) is not inside the domain ({}, {})",
                        i.start,
                        i.end(),
                        self.origin,
                        self.origin + self.length
                    ));
                }
            }
        }
        match self.model {
            Model::Viscous | Model::Nls => {
                if !self.n_cells.is_power_of_two() {
                    problems.push(format!(
                        "spectral models need a power-of-two grid.n_cells (got {})",
                        self.n_cells
                    ));
                }
                if self.model == Model::Viscous && !(self.mu >= 0.0) {
                    problems.push(format!("viscous.mu must be >= 0 (got {})", self.mu));
                }
            }
            Model::Wave => {
                if !(self.wave_c > 0.0) {
                    problems.push(format!("wave.c must be positive (got {})", self.wave_c));
                }
                if !(0.0..=1.0).contains(&self.theta) || !(0.0..=0.5).contains(&self.zeta) {
                    problems.push("wave.theta must lie in [0,1] and wave.zeta in [0,1/2]".into());
                }
            }
            Model::Conservation => {}
        }
        if self.initial == InitialDatum::Soliton && !(self.nls_q > 0.0 && self.nls_k > 0.0) {
            problems.push("soliton datum needs nls.q > 0 and nls.k > 0".into());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(problems.join("; ")))
        }
    }

    /// Canonical text form; [`parse_config`] reads it back unchanged.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        kv("model", self.model.as_str().into());
        kv("grid.n_cells", self.n_cells.to_string());
        kv("grid.length", num(self.length));
        kv("grid.origin", num(self.origin));
        let (c, k) = self.flux.leaf_params();
        kv("flux", self.flux.id());
        kv("flux.c", num(c));
        kv("flux.k", num(k));
        kv("damping.delta", num(self.delta));
        kv("damping.alpha", num(self.alpha));
        kv(
            "damping.omega",
            match &self.omega {
                Omega::Everywhere => "everywhere".into(),
                Omega::Intervals(iv) => iv
                    .iter()
                    .map(|i| format!("{},{}", num(i.start), num(i.length)))
                    .collect::<Vec<_>>()
                    .join(";"),
            },
        );
        kv("dt", num(self.dt));
        kv("t_final", num(self.t_final));
        kv("initial", self.initial.id().into());
        match self.initial {
            InitialDatum::Constant { value } | InitialDatum::Plateau { value } => {
                kv("initial.value", num(value))
            }
            InitialDatum::Sine { mean, amplitude } => {
                kv("initial.value", num(mean));
                kv("initial.amplitude", num(amplitude));
            }
            InitialDatum::Riemann { left, right, split } => {
                kv("initial.left", num(left));
                kv("initial.right", num(right));
                kv("initial.split", num(split));
            }
            InitialDatum::Zero | InitialDatum::Soliton => {}
        }
        kv("viscous.mu", num(self.mu));
        kv("wave.c", num(self.wave_c));
        kv("wave.theta", num(self.theta));
        kv("wave.zeta", num(self.zeta));
        kv("nls.q", num(self.nls_q));
        kv("nls.k", num(self.nls_k));
        kv("nls.c", num(self.nls_c));
        kv("snapshot.interval", num(self.snapshot_interval));
        kv("cfl.policy", self.cfl_policy.as_str().into());
        kv("cfl.max", num(self.cfl_max));
        if let Some(s) = self.advection_max_substep {
            kv("advection.max_substep", num(s));
        }
        kv("splitting.order", self.splitting.as_str().into());
        out
    }

    /// Hex SHA-256 of the canonical text.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_text().as_bytes()))
    }
}

fn num(v: f64) -> String {
    // Display prints the shortest representation that round-trips.
    format!("{v}")
}

const KNOWN_KEYS: &[&str] = &[
    "model",
    "grid.n_cells",
    "grid.length",
    "grid.origin",
    "flux",
    "flux.c",
    "flux.k",
    "damping.delta",
    "damping.alpha",
    "damping.omega",
    "dt",
    "t_final",
    "initial",
    "initial.value",
    "initial.amplitude",
    "initial.left",
    "initial.right",
    "initial.split",
    "viscous.mu",
    "wave.c",
    "wave.theta",
    "wave.zeta",
    "nls.q",
    "nls.k",
    "nls.c",
    "snapshot.interval",
    "cfl.policy",
    "cfl.max",
    "advection.max_substep",
    "splitting.order",
];

const REQUIRED_KEYS: &[&str] = &[
    "model",
    "grid.n_cells",
    "dt",
    "t_final",
    "initial",
    "damping.delta",
    "damping.alpha",
    "damping.omega",
];

/// Parses and validates a config file.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut entries: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (k, v) = content.split_once('=').ok_or_else(|| Error::ConfigParse {
            line,
            message: format!("expected 'key = value', found {content:?}"),
        })?;
        let (k, v) = (k.trim(), v.trim());
        if !KNOWN_KEYS.contains(&k) {
            return Err(Error::ConfigParse {
                line,
                message: format!("unknown key {k:?}"),
            });
        }
        if entries.insert(k, (line, v)).is_some() {
            return Err(Error::ConfigParse {
                line,
                message: format!("duplicate key {k:?}"),
            });
        }
    }

    let mut missing: Vec<&str> = REQUIRED_KEYS
        .iter()
        .copied()
        .filter(|k| !entries.contains_key(k))
        .collect();
    let model_str = entries.get("model").map(|e| e.1);
    let needs_flux = matches!(model_str, Some("conservation") | Some("viscous"));
    if needs_flux && !entries.contains_key("flux") {
        missing.push("flux");
    }
    if !missing.is_empty() {
        return Err(Error::Validation(format!(
            "missing required keys: {}",
            missing.join(", ")
        )));
    }

    let get_f = |k: &str, default: f64| -> Result<f64> {
        match entries.get(k) {
            None => Ok(default),
            Some(&(line, v)) => v.parse::<f64>().map_err(|e| Error::ConfigParse {
                line,
                message: format!("{k}: bad number {v:?}: {e}"),
            }),
        }
    };
    let bad = |k: &str, msg: String| {
        let line = entries.get(k).map(|e| e.0).unwrap_or(0);
        Error::ConfigParse { line, message: msg }
    };

    let model = Model::parse(entries["model"].1)
        .ok_or_else(|| bad("model", format!("unknown model {:?}", entries["model"].1)))?;
    let n_cells = entries["grid.n_cells"]
        .1
        .parse::<usize>()
        .map_err(|e| bad("grid.n_cells", format!("grid.n_cells: {e}")))?;
    let flux_id = entries.get("flux").map(|e| e.1).unwrap_or("linear");
    let flux = FluxModel::parse(flux_id, get_f("flux.c", 1.0)?, get_f("flux.k", 0.25)?)
        .map_err(|e| bad("flux", e.to_string()))?;

    let omega_str = entries["damping.omega"].1;
    let omega = if omega_str == "everywhere" {
        Omega::Everywhere
    } else {
        let mut iv = Vec::new();
        for part in omega_str.split(';') {
            let (a, b) = part.split_once(',').ok_or_else(|| {
                bad("damping.omega", format!("expected 'x0,A' pairs, found {part:?}"))
            })?;
            let a = a.trim().parse::<f64>();
            let b = b.trim().parse::<f64>();
            match (a, b) {
                (Ok(a), Ok(b)) => iv.push(Interval::new(a, b)),
                _ => {
                    return Err(bad("damping.omega", format!("bad interval {part:?}")));
                }
            }
        }
        Omega::Intervals(iv)
    };

    let initial = match entries["initial"].1 {
        "zero" => InitialDatum::Zero,
        "constant" => InitialDatum::Constant {
            value: get_f("initial.value", 1.0)?,
        },
        "sine" => InitialDatum::Sine {
            mean: get_f("initial.value", 0.0)?,
            amplitude: get_f("initial.amplitude", 1.0)?,
        },
        "riemann" => InitialDatum::Riemann {
            left: get_f("initial.left", 1.0)?,
            right: get_f("initial.right", 0.0)?,
            split: get_f("initial.split", 0.5)?,
        },
        "plateau" => InitialDatum::Plateau {
            value: get_f("initial.value", 1.0)?,
        },
        "soliton" => InitialDatum::Soliton,
        other => return Err(bad("initial", format!("unknown initial datum {other:?}"))),
    };

    let cfl_policy = match entries.get("cfl.policy").map(|e| e.1) {
        None | Some("enforce") => CflPolicy::Enforce,
        Some("replicate-paper") => CflPolicy::ReplicatePaper,
        Some(other) => return Err(bad("cfl.policy", format!("unknown cfl policy {other:?}"))),
    };
    let splitting = match entries.get("splitting.order").map(|e| e.1) {
        None | Some("BAB") => SplittingOrder::Bab,
        Some("ABA") => SplittingOrder::Aba,
        Some(other) => {
            return Err(bad("splitting.order", format!("unknown splitting order {other:?}")))
        }
    };
    let advection_max_substep = match entries.get("advection.max_substep") {
        None => None,
        Some(_) => Some(get_f("advection.max_substep", 0.0)?),
    };

    let cfg = RunConfig {
        model,
        n_cells,
        length: get_f("grid.length", 1.0)?,
        origin: get_f("grid.origin", 0.0)?,
        flux,
        delta: get_f("damping.delta", 0.0)?,
        alpha: get_f("damping.alpha", 1.0)?,
        omega,
        dt: get_f("dt", 0.0)?,
        t_final: get_f("t_final", 0.0)?,
        initial,
        mu: get_f("viscous.mu", 0.01)?,
        wave_c: get_f("wave.c", 0.1)?,
        theta: get_f("wave.theta", 0.5)?,
        zeta: get_f("wave.zeta", 0.25)?,
        nls_q: get_f("nls.q", 2.0)?,
        nls_k: get_f("nls.k", 0.81)?,
        nls_c: get_f("nls.c", 20.0)?,
        snapshot_interval: get_f("snapshot.interval", 0.1)?,
        cfl_policy,
        cfl_max: get_f("cfl.max", 0.9)?,
        advection_max_substep,
        splitting,
    };
    cfg.validate()?;
    Ok(cfg)
}
