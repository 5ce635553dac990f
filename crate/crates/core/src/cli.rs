//! Batch commands behind the `ropesim` binary. Each returns the JSON value it
//! would print, so the commands can be driven from code as well.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{make_report, FallReport};
use crate::config::{BoundSummary, ScenarioFile, Setup};
use crate::constitutive::{envelope_values, lower_hull, mixture_intervals};
use crate::design::{optimality_certificate, optimize_law_with, GridKind, OptimizeOptions};
use crate::dynamics::{simulate_carabiner_fall, simulate_fall, IntegratorConfig, RopeLaw, Trajectory};
use crate::error::{Error, Result};
use crate::io::{read_energy_file, write_curve_file, write_envelope};
use crate::plot::{envelope_svg, trajectory_svg};

pub const THREADS_ENV: &str = "ROPE_SIM_THREADS";

pub fn cmd_bound(file: &Path) -> Result<BoundSummary> {
    Ok(ScenarioFile::load(file)?.bound())
}

/// Runs the simulation a scenario file describes.
pub fn run_scenario(file: &ScenarioFile, defaults: &IntegratorConfig) -> Result<(Trajectory, FallReport)> {
    let cfg = file.integrator(defaults)?;
    let traj = match (&file.setup, &file.law) {
        (Setup::Single(s), law) => simulate_fall(s, law.clone(), &cfg)?,
        (Setup::Carabiner(cs), RopeLaw::Elastic(law)) => simulate_carabiner_fall(cs, law, &cfg)?,
        (Setup::Carabiner(_), RopeLaw::Hysteretic(_)) => {
            return Err(Error::Unsupported(
                "hysteretic laws are not supported with a carabiner".into(),
            ))
        }
    };
    let report = make_report(&traj, &file.setup.base())?;
    Ok((traj, report))
}

pub fn cmd_simulate(
    file: &Path,
    defaults: &IntegratorConfig,
    out: Option<&Path>,
    plot: Option<&Path>,
) -> Result<FallReport> {
    let sf = ScenarioFile::load(file)?;
    let (traj, report) = run_scenario(&sf, defaults)?;
    if let Some(p) = out {
        traj.save_csv(p)?;
    }
    if let Some(p) = plot {
        std::fs::write(p, trajectory_svg(&traj))?;
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizeSummary {
    pub gap: f64,
    pub plateau_deviation: f64,
    pub peak_tension: f64,
    pub bound_b0: f64,
    pub constraint_residual: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub n_knots: usize,
    pub seed: u64,
    pub law_csv: PathBuf,
}

/// Optimizes a law for the file's scenario and writes it as a curve CSV with
/// a JSON sidecar next to it.
pub fn cmd_optimize(
    file: &Path,
    n_knots: usize,
    budget: usize,
    seed: u64,
    grid: GridKind,
    out: &Path,
) -> Result<OptimizeSummary> {
    let sf = ScenarioFile::load(file)?;
    let Setup::Single(s) = sf.setup else {
        return Err(Error::Unsupported(
            "optimization is defined for single-rope scenarios".into(),
        ));
    };
    let opts = OptimizeOptions {
        n_knots,
        budget,
        seed,
        grid,
        ..Default::default()
    };
    let result = optimize_law_with(&s, &opts)?;
    let cert = optimality_certificate(&result.law, &s)?;
    write_curve_file(&result.law, out)?;
    let summary = OptimizeSummary {
        gap: cert.gap,
        plateau_deviation: cert.plateau_deviation,
        peak_tension: result.peak_tension,
        bound_b0: crate::analysis::lower_bound_b0(&s),
        constraint_residual: result.constraint_residual,
        iterations: result.iterations,
        evaluations: result.evaluations,
        n_knots,
        seed,
        law_csv: out.to_path_buf(),
    };
    std::fs::write(out.with_extension("json"), serde_json::to_string_pretty(&summary)?)?;
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexifySummary {
    pub samples: usize,
    pub hull_points: usize,
    pub mixture_intervals: Vec<(f64, f64)>,
    pub out: PathBuf,
}

pub fn cmd_convexify(input: &Path, out: &Path, plot: Option<&Path>) -> Result<ConvexifySummary> {
    let samples = read_energy_file(input)?;
    let env = envelope_values(&samples);
    write_envelope(&samples, &env, std::fs::File::create(out)?)?;
    if let Some(p) = plot {
        std::fs::write(p, envelope_svg(samples.points(), &env))?;
    }
    Ok(ConvexifySummary {
        samples: samples.points().len(),
        hull_points: lower_hull(&samples).len(),
        mixture_intervals: mixture_intervals(&samples),
        out: out.to_path_buf(),
    })
}

/// `key=lo:hi:n`; `n` evenly spaced values including both ends.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub key: String,
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl SweepSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::Usage(format!("expected key=lo:hi:n, got `{text}`"));
        let (key, range) = text.split_once('=').ok_or_else(bad)?;
        let parts: Vec<&str> = range.split(':').collect();
        let [lo, hi, n] = parts[..] else {
            return Err(bad());
        };
        let spec = Self {
            key: key.trim().to_string(),
            lo: lo.trim().parse().map_err(|_| bad())?,
            hi: hi.trim().parse().map_err(|_| bad())?,
            n: n.trim().parse().map_err(|_| bad())?,
        };
        if spec.key.is_empty() || spec.n == 0 {
            return Err(bad());
        }
        Ok(spec)
    }

    pub fn values(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        let m = (self.n - 1) as f64;
        (0..self.n)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / m)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub index: usize,
    pub value: f64,
    pub b0: f64,
    pub mu: Option<f64>,
    pub report: Option<FallReport>,
    pub status: String,
}

pub const SUMMARY_FILE: &str = "summary.csv";

/// Runs one simulation per sweep value, in parallel on at most `threads`
/// workers. Writes `point_NNN.json` for each successful point and a
/// `summary.csv`; fails after writing if any point failed.
pub fn cmd_sweep(
    file: &Path,
    spec: &SweepSpec,
    out_dir: &Path,
    defaults: &IntegratorConfig,
    threads: Option<usize>,
) -> Result<Vec<SweepRow>> {
    let base = ScenarioFile::load(file)?;
    // resolve the key once so that a typo fails before any work
    base.with_override(&spec.key, spec.lo)?;
    std::fs::create_dir_all(out_dir)?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let values = spec.values();
    let rows: Vec<SweepRow> = pool.install(|| {
        values
            .par_iter()
            .enumerate()
            .map(|(index, &value)| {
                let run = || -> Result<(BoundSummary, FallReport)> {
                    let sf = base.with_override(&spec.key, value)?;
                    let (_, report) = run_scenario(&sf, defaults)?;
                    let path = out_dir.join(format!("point_{index:03}.json"));
                    std::fs::write(path, serde_json::to_string_pretty(&report)?)?;
                    Ok((sf.bound(), report))
                };
                match run() {
                    Ok((bound, report)) => SweepRow {
                        index,
                        value,
                        b0: bound.b0,
                        mu: bound.mu,
                        report: Some(report),
                        status: "ok".into(),
                    },
                    Err(e) => {
                        let bound = base.with_override(&spec.key, value).map(|f| f.bound());
                        SweepRow {
                            index,
                            value,
                            b0: bound.as_ref().map_or(f64::NAN, |b| b.b0),
                            mu: bound.ok().and_then(|b| b.mu),
                            report: None,
                            status: e.to_string(),
                        }
                    }
                }
            })
            .collect()
    });

    write_summary(&out_dir.join(SUMMARY_FILE), &spec.key, &rows)?;
    let failed = rows.iter().filter(|r| r.report.is_none()).count();
    if failed > 0 {
        return Err(Error::Config(format!(
            "{failed} of {} sweep points failed; see {}",
            rows.len(),
            out_dir.join(SUMMARY_FILE).display()
        )));
    }
    Ok(rows)
}

fn write_summary(path: &Path, key: &str, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record([
        "index",
        key,
        "b0",
        "mu",
        "peak_tension",
        "optimality_gap",
        "max_elongation",
        "arrest_time_t",
        "status",
    ])?;
    let num = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
    for r in rows {
        let rep = r.report.as_ref();
        w.write_record([
            r.index.to_string(),
            r.value.to_string(),
            r.b0.to_string(),
            num(r.mu),
            num(rep.map(|p| p.peak_tension)),
            num(rep.map(|p| p.optimality_gap)),
            num(rep.map(|p| p.max_elongation)),
            num(rep.map(|p| p.arrest_time_t)),
            r.status.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
