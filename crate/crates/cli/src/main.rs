use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use sublin::characteristics::{trace_bundle_strided, uniform_seeds};
use sublin::checks::{run_check, CHECKS};
use sublin::oracle::{iterate_sequences, BoundaryTrace, OracleInput};
use sublin::{io, presets, run, Model, RunConfig, RunRecord};

#[derive(Parser)]
#[command(name = "sublin", version, about = "Conservation laws with localized sublinear damping")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one model and write its record directory.
    Run {
        model: ModelArg,
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        out: PathBuf,
    },
    /// Trace characteristics through a stored record.
    Trace {
        #[arg(long)]
        record: PathBuf,
        /// Number of seeds spread uniformly over the domain.
        #[arg(long, default_value_t = 32)]
        seeds: usize,
        /// Start time of the curves.
        #[arg(long, default_value_t = 0.0)]
        t0: f64,
        /// Keep every n-th time step of each curve.
        #[arg(long, default_value_t = 10)]
        stride: usize,
        /// CSV output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Semi-analytic quantities for a constant datum and one damped interval.
    Oracle {
        #[command(flatten)]
        source: Source,
        /// Also sample the inflow trace on this many points up to t_final.
        #[arg(long, default_value_t = 0)]
        samples: usize,
        /// Output directory for report.txt (and trace.csv); stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate named checks on a stored record.
    Analyze {
        #[arg(long)]
        record: PathBuf,
        /// Comma separated check names. Defaults to the preset's expected
        /// checks, or every applicable check for runs from a config file.
        #[arg(long, value_delimiter = ',')]
        checks: Vec<String>,
    },
    /// Run several presets or configs side by side, one directory each.
    Sweep {
        #[arg(long = "preset")]
        presets: Vec<String>,
        #[arg(long = "config")]
        configs: Vec<PathBuf>,
        #[arg(long, default_value_t = 1)]
        coarse: usize,
        #[arg(long)]
        out: PathBuf,
        /// Run the expected checks of each preset after its run.
        #[arg(long)]
        check: bool,
    },
    /// List bundled presets.
    Presets,
}

#[derive(Args)]
struct Source {
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
    /// Scale mesh size and time step together by this factor.
    #[arg(long, default_value_t = 1)]
    coarse: usize,
}

impl Source {
    /// Notes recorded in the manifest so `analyze` can find the expected checks.
    fn notes(&self) -> Vec<(String, String)> {
        match &self.preset {
            Some(p) => vec![("preset".into(), p.clone()), ("coarse".into(), self.coarse.to_string())],
            None => Vec::new(),
        }
    }

    fn load(&self) -> Result<RunConfig> {
        let cfg = match (&self.config, &self.preset) {
            (Some(path), None) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                sublin::parse_config(&text).with_context(|| format!("in {}", path.display()))?
            }
            (None, Some(name)) => presets::find(name)?.config()?,
            _ => bail!("give exactly one of --config or --preset"),
        };
        Ok(if self.coarse > 1 { cfg.coarsen(self.coarse)? } else { cfg })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Conservation,
    Viscous,
    Wave,
    Nls,
}

impl ModelArg {
    fn model(self) -> Model {
        match self {
            ModelArg::Conservation => Model::Conservation,
            ModelArg::Viscous => Model::Viscous,
            ModelArg::Wave => Model::Wave,
            ModelArg::Nls => Model::Nls,
        }
    }
}

fn run_to(cfg: &RunConfig, notes: &[(String, String)], out: &Path) -> Result<RunRecord> {
    let mut rec = run::run(cfg)?;
    for (k, v) in notes {
        rec.notes.insert(k.clone(), v.clone());
    }
    rec.write_dir(out)
        .with_context(|| format!("writing record to {}", out.display()))?;
    Ok(rec)
}

/// Expected checks of the preset the record came from, else every check
/// that applies to the record.
fn default_checks(rec: &RunRecord) -> Vec<String> {
    if let Some(p) = rec.notes.get("preset").and_then(|n| presets::find(n).ok()) {
        return p.checks.iter().map(|s| s.to_string()).collect();
    }
    CHECKS
        .iter()
        .filter(|c| run_check(c, rec).is_ok())
        .map(|c| c.to_string())
        .collect()
}

fn report_checks(rec: &RunRecord, names: &[String]) -> Result<(String, bool)> {
    let mut text = String::new();
    let mut all = true;
    for name in names {
        let o = run_check(name, rec)?;
        all &= o.passed;
        text.push_str(&o.to_text());
    }
    Ok((text, all))
}

fn cmd_run(model: ModelArg, source: &Source, out: &Path) -> Result<()> {
    let cfg = source.load()?;
    if cfg.model != model.model() {
        bail!(
            "config describes a {} run, not {}",
            cfg.model.as_str(),
            model.model().as_str()
        );
    }
    let rec = run_to(&cfg, &source.notes(), out)?;
    print!("{}", rec.manifest());
    println!("out={}", out.display());
    Ok(())
}

fn cmd_trace(record: &Path, seeds: usize, t0: f64, stride: usize, out: Option<&Path>) -> Result<()> {
    let rec = RunRecord::read_dir(record)?;
    if rec.config.model != Model::Conservation {
        bail!("characteristics are defined for conservation records only");
    }
    let seeds = uniform_seeds(rec.config.origin, rec.config.length, seeds);
    let bundle = trace_bundle_strided(&rec, &seeds, t0, stride)?;
    let csv = bundle.to_csv();
    match out {
        Some(p) => fs::write(p, csv)?,
        None => print!("{csv}"),
    }
    eprintln!("ordering_violations={}", bundle.ordering_violations);
    Ok(())
}

fn cmd_oracle(source: &Source, samples: usize, out: Option<&Path>) -> Result<()> {
    let cfg = source.load()?;
    let input = OracleInput::from_config(&cfg)?;
    let report = iterate_sequences(&input)?;
    let text = report.to_text();
    let trace = if samples > 0 {
        Some(BoundaryTrace::new(&report)?.sample(0.0, cfg.t_final, samples)?)
    } else {
        None
    };
    match out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join("report.txt"), &text)?;
            if let Some(s) = &trace {
                io::write_series("inflow_trace", s, &dir.join("trace.csv"))?;
            }
        }
        None => {
            print!("{text}");
            if let Some(s) = &trace {
                print!("{}", io::series_to_string("inflow_trace", s));
            }
        }
    }
    Ok(())
}

fn cmd_analyze(record: &Path, checks: &[String]) -> Result<bool> {
    let rec = RunRecord::read_dir(record)?;
    let names = if checks.is_empty() { default_checks(&rec) } else { checks.to_vec() };
    let (text, all) = report_checks(&rec, &names)?;
    print!("{text}");
    println!("result={}", if all { "PASS" } else { "FAIL" });
    Ok(all)
}

struct Job {
    name: String,
    config: RunConfig,
    notes: Vec<(String, String)>,
    checks: Vec<String>,
}

fn cmd_sweep(
    preset_names: &[String],
    configs: &[PathBuf],
    coarse: usize,
    out: &Path,
    check: bool,
) -> Result<bool> {
    let mut jobs = Vec::new();
    for name in preset_names {
        let p = presets::find(name)?;
        jobs.push(Job {
            name: p.name.to_string(),
            config: p.coarse(coarse)?,
            notes: vec![("preset".into(), p.name.into()), ("coarse".into(), coarse.to_string())],
            checks: p.checks.iter().map(|s| s.to_string()).collect(),
        });
    }
    for path in configs {
        let source = Source { config: Some(path.clone()), preset: None, coarse };
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("config");
        jobs.push(Job {
            name: stem.to_string(),
            config: source.load()?,
            notes: Vec::new(),
            checks: Vec::new(),
        });
    }
    if jobs.is_empty() {
        bail!("sweep needs at least one --preset or --config");
    }
    let mut names: Vec<&str> = jobs.iter().map(|j| j.name.as_str()).collect();
    names.sort_unstable();
    if names.windows(2).any(|w| w[0] == w[1]) {
        bail!("sweep entries must have distinct names");
    }

    let results: Vec<Result<(String, bool)>> = std::thread::scope(|s| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|job| {
                s.spawn(move || -> Result<(String, bool)> {
                    let dir = out.join(&job.name);
                    let rec = run_to(&job.config, &job.notes, &dir).with_context(|| job.name.clone())?;
                    if check && !job.checks.is_empty() {
                        report_checks(&rec, &job.checks)
                    } else {
                        Ok((String::new(), true))
                    }
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(anyhow::anyhow!("run panicked"))))
            .collect()
    });

    let mut all = true;
    for (job, r) in jobs.iter().zip(results) {
        let (text, ok) = r?;
        all &= ok;
        println!("{} -> {}", job.name, out.join(&job.name).display());
        print!("{text}");
    }
    Ok(all)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run { model, source, out } => cmd_run(*model, source, out).map(|_| true),
        Command::Trace { record, seeds, t0, stride, out } => {
            cmd_trace(record, *seeds, *t0, *stride, out.as_deref()).map(|_| true)
        }
        Command::Oracle { source, samples, out } => {
            cmd_oracle(source, *samples, out.as_deref()).map(|_| true)
        }
        Command::Analyze { record, checks } => cmd_analyze(record, checks),
        Command::Sweep { presets, configs, coarse, out, check } => {
            cmd_sweep(presets, configs, *coarse, out, *check)
        }
        Command::Presets => {
            for p in presets::ALL {
                println!("{:<8} {}  [{}]", p.name, p.summary, p.checks.join(","));
            }
            Ok(true)
        }
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
