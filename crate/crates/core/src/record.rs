//! Run records: snapshots, named series and the config echo, with a
//! directory layout on disk.
//!
//! ```text
//! <dir>/manifest.txt        key=value summary including the config hash
//! <dir>/config.txt          canonical config text
//! <dir>/snapshots/u_00012.csv
//! <dir>/series/sup_norm.csv
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::config::{parse_config, RunConfig};
use crate::error::{Error, Result};
use crate::grid::{ComplexField, RealField};
use crate::io::{
    fmt_f64, read_complex_snapshot, read_series, read_snapshot, write_complex_snapshot,
    write_series, write_snapshot, Metadata, TimeSeries,
};

#[derive(Clone, Debug)]
pub struct RunRecord {
    pub config: RunConfig,
    /// Real snapshot channels, e.g. `u` and, for the wave model, `v`.
    pub channels: BTreeMap<String, Vec<RealField>>,
    pub complex_snapshots: Vec<ComplexField>,
    pub series: BTreeMap<String, TimeSeries>,
    /// Extra key=value lines for the manifest.
    pub notes: Metadata,
}

impl RunRecord {
    pub fn new(config: RunConfig) -> Self {
        Self {
            config,
            channels: BTreeMap::new(),
            complex_snapshots: Vec::new(),
            series: BTreeMap::new(),
            notes: Metadata::new(),
        }
    }

    pub fn snapshots(&self) -> &[RealField] {
        self.channel("u")
    }

    pub fn channel(&self, name: &str) -> &[RealField] {
        self.channels.get(name).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn push_snapshot(&mut self, channel: &str, field: RealField) {
        self.channels.entry(channel.to_string()).or_default().push(field);
    }

    pub fn series_mut(&mut self, name: &str) -> &mut TimeSeries {
        self.series.entry(name.to_string()).or_default()
    }

    pub fn series(&self, name: &str) -> Option<&TimeSeries> {
        self.series.get(name)
    }

    /// Snapshot of channel `u` closest in time to `t`.
    pub fn snapshot_near(&self, t: f64) -> Option<&RealField> {
        self.snapshots()
            .iter()
            .min_by(|a, b| (a.time - t).abs().total_cmp(&(b.time - t).abs()))
    }

    pub fn manifest(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "model={}", self.config.model.as_str());
        let _ = writeln!(out, "config_hash={}", self.config.hash());
        let _ = writeln!(out, "dt={}", fmt_f64(self.config.dt));
        let _ = writeln!(out, "t_final={}", fmt_f64(self.config.t_final));
        for (name, snaps) in &self.channels {
            let _ = writeln!(out, "snapshots.{name}={}", snaps.len());
        }
        if !self.complex_snapshots.is_empty() {
            let _ = writeln!(out, "snapshots.complex={}", self.complex_snapshots.len());
        }
        for (name, s) in &self.series {
            let _ = writeln!(out, "series.{name}={}", s.len());
        }
        for (k, v) in &self.notes {
            let _ = writeln!(out, "{k}={v}");
        }
        out
    }

    pub fn write_dir(&self, dir: &Path) -> Result<()> {
        let snap_dir = dir.join("snapshots");
        let series_dir = dir.join("series");
        fs::create_dir_all(&snap_dir)?;
        fs::create_dir_all(&series_dir)?;
        fs::write(dir.join("manifest.txt"), self.manifest())?;
        fs::write(dir.join("config.txt"), self.config.to_text())?;

        let mut meta = Metadata::new();
        meta.insert("model".into(), self.config.model.as_str().into());
        meta.insert("config_hash".into(), self.config.hash());
        for (name, snaps) in &self.channels {
            meta.insert("channel".into(), name.clone());
            for (i, f) in snaps.iter().enumerate() {
                write_snapshot(f, &snap_dir.join(format!("{name}_{i:05}.csv")), &meta)?;
            }
        }
        meta.insert("channel".into(), "complex".into());
        for (i, f) in self.complex_snapshots.iter().enumerate() {
            write_complex_snapshot(f, &snap_dir.join(format!("complex_{i:05}.csv")), &meta)?;
        }
        for (name, s) in &self.series {
            write_series(name, s, &series_dir.join(format!("{name}.csv")))?;
        }
        Ok(())
    }

    pub fn read_dir(dir: &Path) -> Result<Self> {
        let text = fs::read_to_string(dir.join("config.txt"))?;
        let config = parse_config(&text)?;
        let mut rec = RunRecord::new(config);

        let mut files: Vec<_> = fs::read_dir(dir.join("snapshots"))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "csv"))
            .collect();
        files.sort();
        for path in files {
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("");
            let Some((channel, _)) = stem.rsplit_once('_') else {
                continue;
            };
            if channel == "complex" {
                rec.complex_snapshots.push(read_complex_snapshot(&path)?.0);
            } else {
                let f = read_snapshot(&path)?;
                rec.push_snapshot(channel, f);
            }
        }

        let series_dir = dir.join("series");
        if series_dir.is_dir() {
            let mut files: Vec<_> = fs::read_dir(series_dir)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .collect();
            files.sort();
            for path in files {
                let (name, s) = read_series(&path)?;
                rec.series.insert(name, s);
            }
        }
        if let Ok(manifest) = fs::read_to_string(dir.join("manifest.txt")) {
            for line in manifest.lines() {
                let Some((k, v)) = line.split_once('=') else { continue };
                let derived = ["model", "config_hash", "dt", "t_final"].contains(&k)
                    || k.starts_with("snapshots.")
                    || k.starts_with("series.");
                if !derived {
                    rec.notes.insert(k.to_string(), v.to_string());
                }
            }
        }
        if rec.snapshots().is_empty() && rec.complex_snapshots.is_empty() && rec.series.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "{} holds no snapshots or series",
                dir.display()
            )));
        }
        Ok(rec)
    }
}
