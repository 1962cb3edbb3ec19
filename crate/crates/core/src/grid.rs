//! Uniform 1-D meshes and the field containers living on them.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Boundary topology of a [`Grid1D`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Topology {
    /// Cell-centered values on a torus.
    Periodic,
    /// Node-centered values including both end points.
    Dirichlet,
}

impl Topology {
    pub fn as_str(self) -> &'static str {
        match self {
            Topology::Periodic => "periodic",
            Topology::Dirichlet => "dirichlet",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "periodic" => Some(Topology::Periodic),
            "dirichlet" => Some(Topology::Dirichlet),
            _ => None,
        }
    }
}

/// Uniform mesh of `n_cells` intervals on `[origin, origin + length]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid1D {
    n_cells: usize,
    length: f64,
    origin: f64,
    topology: Topology,
}

impl Grid1D {
    pub fn new(n_cells: usize, length: f64, origin: f64, topology: Topology) -> Result<Self> {
        if n_cells < 2 {
            return Err(Error::InvalidArgument(format!(
                "grid needs at least 2 cells, got {n_cells}"
            )));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "grid length must be positive, got {length}"
            )));
        }
        if !origin.is_finite() {
            return Err(Error::InvalidArgument(format!("grid origin {origin} is not finite")));
        }
        Ok(Self {
            n_cells,
            length,
            origin,
            topology,
        })
    }

    pub fn periodic(n_cells: usize, length: f64, origin: f64) -> Result<Self> {
        Self::new(n_cells, length, origin, Topology::Periodic)
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n_cells as f64
    }

    /// Number of stored values: cells for periodic grids, nodes for Dirichlet grids.
    pub fn len(&self) -> usize {
        match self.topology {
            Topology::Periodic => self.n_cells,
            Topology::Dirichlet => self.n_cells + 1,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Position of value `j`: a cell center or a node.
    pub fn point(&self, j: usize) -> f64 {
        let h = self.spacing();
        match self.topology {
            Topology::Periodic => self.origin + (j as f64 + 0.5) * h,
            Topology::Dirichlet => self.origin + j as f64 * h,
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len()).map(|j| self.point(j)).collect()
    }

    /// Maps `x` into `[origin, origin + length)`.
    pub fn wrap(&self, x: f64) -> f64 {
        let r = (x - self.origin).rem_euclid(self.length);
        // rem_euclid can round up to exactly `length`
        let r = if r >= self.length { 0.0 } else { r };
        self.origin + r
    }

    pub fn end(&self) -> f64 {
        self.origin + self.length
    }
}

/// Real values attached to a grid at a given time.
#[derive(Clone, Debug, PartialEq)]
pub struct RealField {
    pub grid: Grid1D,
    pub time: f64,
    pub values: Vec<f64>,
}

impl RealField {
    pub fn new(grid: Grid1D, time: f64, values: Vec<f64>) -> Result<Self> {
        check_len(&grid, values.len())?;
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidDatum { index, value });
        }
        Ok(Self { grid, time, values })
    }

    pub fn zeros(grid: Grid1D, time: f64) -> Self {
        Self {
            grid,
            time,
            values: vec![0.0; grid.len()],
        }
    }

    /// Samples `f` at every cell center (or node) at time zero.
    pub fn sample(grid: Grid1D, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.points().into_iter().map(f).collect();
        Self::new(grid, 0.0, values)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum::<f64>() * self.grid.spacing()
    }

    pub fn mass(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.spacing()
    }

    /// Periodic linear interpolation between cell centers.
    pub fn interpolate(&self, x: f64) -> f64 {
        let g = &self.grid;
        let h = g.spacing();
        match g.topology() {
            Topology::Periodic => {
                let n = g.n_cells();
                let s = (g.wrap(x) - g.origin()) / h - 0.5;
                let i = s.floor();
                let theta = s - i;
                let i0 = (i as isize).rem_euclid(n as isize) as usize;
                let i1 = (i0 + 1) % n;
                (1.0 - theta) * self.values[i0] + theta * self.values[i1]
            }
            Topology::Dirichlet => {
                let s = ((x - g.origin()) / h).clamp(0.0, g.n_cells() as f64);
                let i = (s.floor() as usize).min(g.n_cells() - 1);
                let theta = s - i as f64;
                (1.0 - theta) * self.values[i] + theta * self.values[i + 1]
            }
        }
    }
}

/// Complex values attached to a grid at a given time.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexField {
    pub grid: Grid1D,
    pub time: f64,
    pub values: Vec<Complex64>,
}

impl ComplexField {
    pub fn new(grid: Grid1D, time: f64, values: Vec<Complex64>) -> Result<Self> {
        check_len(&grid, values.len())?;
        if let Some((index, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            let value = if v.re.is_finite() { v.im } else { v.re };
            return Err(Error::InvalidDatum { index, value });
        }
        Ok(Self { grid, time, values })
    }

    pub fn sample(grid: Grid1D, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = grid.points().into_iter().map(f).collect();
        Self::new(grid, 0.0, values)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.norm()))
    }

    /// Discrete mass `sum |u_j|^2 dx`.
    pub fn mass(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.spacing()
    }
}

fn check_len(grid: &Grid1D, len: usize) -> Result<()> {
    if len != grid.len() {
        return Err(Error::InvalidArgument(format!(
            "field has {len} values but the grid expects {}",
            grid.len()
        )));
    }
    Ok(())
}
