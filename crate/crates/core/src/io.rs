//! Plain-text snapshot and time-series files.
//!
//! Every number is written with 17 significant decimal digits so that a
//! write/read cycle reproduces the stored `f64` bit for bit.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{ComplexField, Grid1D, RealField, Topology};

/// Free-form `key=value` header metadata.
pub type Metadata = BTreeMap<String, String>;

/// Formats a float with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn header(out: &mut String, kind: &str, grid: &Grid1D, time: f64, meta: &Metadata) {
    let _ = writeln!(out, "# kind={kind}");
    let _ = writeln!(out, "# time={}", fmt_f64(time));
    let _ = writeln!(out, "# topology={}", grid.topology().as_str());
    let _ = writeln!(out, "# n_cells={}", grid.n_cells());
    let _ = writeln!(out, "# length={}", fmt_f64(grid.length()));
    let _ = writeln!(out, "# origin={}", fmt_f64(grid.origin()));
    for (k, v) in meta {
        let _ = writeln!(out, "# {k}={v}");
    }
}

pub fn snapshot_to_string(field: &RealField, meta: &Metadata) -> String {
    let mut out = String::with_capacity(48 * field.values.len() + 256);
    header(&mut out, "real", &field.grid, field.time, meta);
    out.push_str("x,value\n");
    for (j, v) in field.values.iter().enumerate() {
        let _ = writeln!(out, "{},{}", fmt_f64(field.grid.point(j)), fmt_f64(*v));
    }
    out
}

pub fn complex_snapshot_to_string(field: &ComplexField, meta: &Metadata) -> String {
    let mut out = String::with_capacity(72 * field.values.len() + 256);
    header(&mut out, "complex", &field.grid, field.time, meta);
    out.push_str("x,re,im\n");
    for (j, v) in field.values.iter().enumerate() {
        let _ = writeln!(
            out,
            "{},{},{}",
            fmt_f64(field.grid.point(j)),
            fmt_f64(v.re),
            fmt_f64(v.im)
        );
    }
    out
}

pub fn write_snapshot(field: &RealField, path: &Path, meta: &Metadata) -> Result<()> {
    fs::write(path, snapshot_to_string(field, meta))?;
    Ok(())
}

pub fn write_complex_snapshot(field: &ComplexField, path: &Path, meta: &Metadata) -> Result<()> {
    fs::write(path, complex_snapshot_to_string(field, meta))?;
    Ok(())
}

struct Parsed {
    meta: Metadata,
    grid: Grid1D,
    time: f64,
    rows: Vec<Vec<f64>>,
}

fn parse_snapshot(path: &Path, text: &str, columns: usize) -> Result<Parsed> {
    let fail = |line: usize, message: String| Error::Format {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut meta = Metadata::new();
    let mut rows = Vec::new();
    let mut seen_columns = false;
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let (k, v) = rest
                .split_once('=')
                .ok_or_else(|| fail(lineno, format!("header line without '=': {line}")))?;
            meta.insert(k.trim().to_string(), v.trim().to_string());
            continue;
        }
        if !seen_columns {
            seen_columns = true;
            if line.starts_with('x') {
                continue;
            }
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != columns {
            return Err(fail(
                lineno,
                format!("expected {columns} columns, found {}", cells.len()),
            ));
        }
        let row = cells
            .iter()
            .map(|c| {
                c.trim()
                    .parse::<f64>()
                    .map_err(|e| fail(lineno, format!("bad number {c:?}: {e}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    let get = |key: &str| {
        meta.get(key)
            .ok_or_else(|| fail(0, format!("missing header key {key}")))
    };
    let num = |key: &str| -> Result<f64> {
        get(key)?
            .parse::<f64>()
            .map_err(|e| fail(0, format!("header {key}: {e}")))
    };
    let topology = Topology::parse(get("topology")?)
        .ok_or_else(|| fail(0, "unknown topology".to_string()))?;
    let n_cells = get("n_cells")?
        .parse::<usize>()
        .map_err(|e| fail(0, format!("header n_cells: {e}")))?;
    let grid = Grid1D::new(n_cells, num("length")?, num("origin")?, topology)?;
    let time = num("time")?;
    if rows.len() != grid.len() {
        return Err(fail(
            text.lines().count(),
            format!("expected {} rows, found {}", grid.len(), rows.len()),
        ));
    }
    for key in ["kind", "time", "topology", "n_cells", "length", "origin"] {
        meta.remove(key);
    }
    Ok(Parsed {
        meta,
        grid,
        time,
        rows,
    })
}

pub fn read_snapshot(path: &Path) -> Result<RealField> {
    read_snapshot_with_meta(path).map(|(f, _)| f)
}

pub fn read_snapshot_with_meta(path: &Path) -> Result<(RealField, Metadata)> {
    let text = fs::read_to_string(path)?;
    let p = parse_snapshot(path, &text, 2)?;
    let values = p.rows.iter().map(|r| r[1]).collect();
    Ok((RealField::new(p.grid, p.time, values)?, p.meta))
}

pub fn read_complex_snapshot(path: &Path) -> Result<(ComplexField, Metadata)> {
    let text = fs::read_to_string(path)?;
    let p = parse_snapshot(path, &text, 3)?;
    let values = p.rows.iter().map(|r| Complex64::new(r[1], r[2])).collect();
    Ok((ComplexField::new(p.grid, p.time, values)?, p.meta))
}

/// A named scalar time series.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

impl TimeSeries {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, t: f64, v: f64) {
        self.times.push(t);
        self.values.push(v);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.times.iter().copied().zip(self.values.iter().copied())
    }

    /// Linear interpolation in time, clamped at both ends.
    pub fn value_at(&self, t: f64) -> Option<f64> {
        if self.is_empty() {
            return None;
        }
        let i = self.times.partition_point(|&s| s <= t);
        if i == 0 {
            return Some(self.values[0]);
        }
        if i == self.len() {
            return Some(self.values[self.len() - 1]);
        }
        let (t0, t1) = (self.times[i - 1], self.times[i]);
        let (v0, v1) = (self.values[i - 1], self.values[i]);
        if t1 == t0 {
            return Some(v1);
        }
        let theta = (t - t0) / (t1 - t0);
        Some((1.0 - theta) * v0 + theta * v1)
    }

    /// Sub-series restricted to `lo <= t <= hi`.
    pub fn window(&self, lo: f64, hi: f64) -> TimeSeries {
        let mut out = TimeSeries::new();
        for (t, v) in self.iter().filter(|(t, _)| *t >= lo && *t <= hi) {
            out.push(t, v);
        }
        out
    }
}

pub fn series_to_string(name: &str, series: &TimeSeries) -> String {
    let mut out = String::with_capacity(48 * series.len() + 64);
    let _ = writeln!(out, "# series={name}");
    out.push_str("t,value\n");
    for (t, v) in series.iter() {
        let _ = writeln!(out, "{},{}", fmt_f64(t), fmt_f64(v));
    }
    out
}

pub fn write_series(name: &str, series: &TimeSeries, path: &Path) -> Result<()> {
    fs::write(path, series_to_string(name, series))?;
    Ok(())
}

pub fn read_series(path: &Path) -> Result<(String, TimeSeries)> {
    let text = fs::read_to_string(path)?;
    let fail = |line: usize, message: String| Error::Format {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut name = String::new();
    let mut series = TimeSeries::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line == "t,value" {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(("series", v)) = rest.split_once('=').map(|(k, v)| (k.trim(), v.trim())) {
                name = v.to_string();
            }
            continue;
        }
        let (a, b) = line
            .split_once(',')
            .ok_or_else(|| fail(i + 1, "expected 't,value'".to_string()))?;
        let t = a
            .trim()
            .parse::<f64>()
            .map_err(|e| fail(i + 1, format!("bad time {a:?}: {e}")))?;
        let v = b
            .trim()
            .parse::<f64>()
            .map_err(|e| fail(i + 1, format!("bad value {b:?}: {e}")))?;
        series.push(t, v);
    }
    Ok((name, series))
}
