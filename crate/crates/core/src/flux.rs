//! Flux functions `f` with analytic first and second derivatives.

use std::fmt;

use crate::error::{Error, Result};

/// Shape class of a flux on the range of interest.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convexity {
    Linear,
    Convex,
    Concave,
    NonConvex,
}

/// A scalar flux. Composite variants wrap an inner flux.
#[derive(Clone, Debug, PartialEq)]
pub enum FluxModel {
    /// `f(u) = c u`
    Linear { c: f64 },
    /// `f(u) = u^2 / 2`
    Burgers,
    /// `f(u) = u^2 / (u^2 + k (1 - u)^2)`, evaluated on all of the real line.
    BuckleyLeverett { k: f64 },
    /// `g(s) = -f(s)`: companion of a reflection `x -> -x` in space.
    Reflected(Box<FluxModel>),
    /// `h(s) = -f(-s)`: companion of the sign flip `u -> -u`.
    Negated(Box<FluxModel>),
}

impl FluxModel {
    pub fn linear(c: f64) -> Self {
        FluxModel::Linear { c }
    }

    pub fn buckley_leverett(k: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "Buckley-Leverett parameter must be positive, got {k}"
            )));
        }
        Ok(FluxModel::BuckleyLeverett { k })
    }

    /// Flux value, unchecked.
    #[inline]
    pub fn f(&self, u: f64) -> f64 {
        match self {
            FluxModel::Linear { c } => c * u,
            FluxModel::Burgers => 0.5 * u * u,
            FluxModel::BuckleyLeverett { k } => {
                let w = 1.0 - u;
                u * u / (u * u + k * w * w)
            }
            FluxModel::Reflected(inner) => -inner.f(u),
            FluxModel::Negated(inner) => -inner.f(-u),
        }
    }

    /// First derivative, unchecked.
    #[inline]
    pub fn df(&self, u: f64) -> f64 {
        match self {
            FluxModel::Linear { c } => *c,
            FluxModel::Burgers => u,
            FluxModel::BuckleyLeverett { k } => {
                let w = 1.0 - u;
                let d = u * u + k * w * w;
                2.0 * k * u * w / (d * d)
            }
            FluxModel::Reflected(inner) => -inner.df(u),
            FluxModel::Negated(inner) => inner.df(-u),
        }
    }

    /// Second derivative, unchecked.
    pub fn d2f(&self, u: f64) -> f64 {
        match self {
            FluxModel::Linear { .. } => 0.0,
            FluxModel::Burgers => 1.0,
            FluxModel::BuckleyLeverett { k } => {
                let w = 1.0 - u;
                let d = u * u + k * w * w;
                let dd = 2.0 * u - 2.0 * k * w;
                let n = 2.0 * k * u * w;
                let dn = 2.0 * k * (1.0 - 2.0 * u);
                (dn * d - 2.0 * n * dd) / (d * d * d)
            }
            FluxModel::Reflected(inner) => -inner.d2f(u),
            FluxModel::Negated(inner) => -inner.d2f(-u),
        }
    }

    pub fn eval_flux(&self, u: f64) -> Result<f64> {
        check_finite(u)?;
        Ok(self.f(u))
    }

    pub fn eval_flux_derivative(&self, u: f64) -> Result<f64> {
        check_finite(u)?;
        Ok(self.df(u))
    }

    /// Flux of `w = -u`: `h(s) = -f(-s)`.
    pub fn negate(&self) -> FluxModel {
        FluxModel::Negated(Box::new(self.clone()))
    }

    /// Flux of `v(x) = u(-x)`: `g(s) = -f(s)`.
    pub fn reflect(&self) -> FluxModel {
        FluxModel::Reflected(Box::new(self.clone()))
    }

    /// `f'(0)`.
    pub fn speed_at_zero(&self) -> f64 {
        self.df(0.0)
    }

    /// Classifies the flux on `[-bound, bound]` from a sampled second derivative.
    pub fn convexity(&self, bound: f64) -> Convexity {
        let n = 1000;
        let (mut pos, mut neg) = (false, false);
        for i in 0..=n {
            let u = -bound + 2.0 * bound * i as f64 / n as f64;
            let c = self.d2f(u);
            pos |= c > 0.0;
            neg |= c < 0.0;
        }
        match (pos, neg) {
            (false, false) => Convexity::Linear,
            (true, false) => Convexity::Convex,
            (false, true) => Convexity::Concave,
            (true, true) => Convexity::NonConvex,
        }
    }

    /// `inf |f'|` and `sup |f'|` over a lattice of `[-bound, bound]` (endpoints included).
    pub fn speed_range(&self, bound: f64, samples: usize) -> (f64, f64) {
        let n = samples.max(2);
        let mut lo = f64::INFINITY;
        let mut hi = 0.0_f64;
        for i in 0..=n {
            let u = -bound + 2.0 * bound * i as f64 / n as f64;
            let s = self.df(u).abs();
            lo = lo.min(s);
            hi = hi.max(s);
        }
        (lo, hi)
    }

    /// Parses `linear`, `burgers`, `buckley_leverett`, `negated:<inner>` or
    /// `reflected:<inner>`, taking `c` and `k` for the leaf flux.
    pub fn parse(id: &str, c: f64, k: f64) -> Result<Self> {
        let id = id.trim();
        if let Some(inner) = id.strip_prefix("negated:") {
            return Ok(Self::parse(inner, c, k)?.negate());
        }
        if let Some(inner) = id.strip_prefix("reflected:") {
            return Ok(Self::parse(inner, c, k)?.reflect());
        }
        match id {
            "linear" => Ok(FluxModel::linear(c)),
            "burgers" => Ok(FluxModel::Burgers),
            "buckley_leverett" => FluxModel::buckley_leverett(k),
            other => Err(Error::InvalidArgument(format!("unknown flux {other:?}"))),
        }
    }

    /// Identifier accepted by [`FluxModel::parse`].
    pub fn id(&self) -> String {
        match self {
            FluxModel::Linear { .. } => "linear".into(),
            FluxModel::Burgers => "burgers".into(),
            FluxModel::BuckleyLeverett { .. } => "buckley_leverett".into(),
            FluxModel::Reflected(inner) => format!("reflected:{}", inner.id()),
            FluxModel::Negated(inner) => format!("negated:{}", inner.id()),
        }
    }

    /// Parameters `(c, k)` of the innermost flux, with defaults where unused.
    pub fn leaf_params(&self) -> (f64, f64) {
        match self {
            FluxModel::Linear { c } => (*c, 0.25),
            FluxModel::Burgers => (1.0, 0.25),
            FluxModel::BuckleyLeverett { k } => (1.0, *k),
            FluxModel::Reflected(inner) | FluxModel::Negated(inner) => inner.leaf_params(),
        }
    }
}

impl fmt::Display for FluxModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FluxModel::Linear { c } => write!(f, "linear(c={c})"),
            FluxModel::Burgers => write!(f, "burgers"),
            FluxModel::BuckleyLeverett { k } => write!(f, "buckley_leverett(k={k})"),
            FluxModel::Reflected(inner) => write!(f, "reflected({inner})"),
            FluxModel::Negated(inner) => write!(f, "negated({inner})"),
        }
    }
}

fn check_finite(u: f64) -> Result<()> {
    if u.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("flux argument {u} is not finite")))
    }
}
