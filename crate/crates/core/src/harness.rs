//! Monte-Carlo experiment runner and CSV reporting.
//!
//! Each (seed, sweep point) cell draws one scenario and runs every requested
//! method on that same observation. Scenario seeds come from
//! [`rng::split`](crate::rng::split)`(master_seed, seed_index)`, so the same
//! channel is reused across sweep points of one seed and results do not
//! depend on how cells are scheduled across threads.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use crate::baselines::{run_baseline_observed, BaselineKind};
use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::estimator::{run_observed, EstimateReport, EstimatorOptions, EstimatorState};
use crate::matrix::CMatrix;
use crate::par;
use crate::rng;
use crate::sim::{simulate, ChannelRealization, Scenario};

/// Floor applied to the reported MSE on exact recovery.
pub const MSE_FLOOR_DB: f64 = -200.0;

pub const CSV_HEADER: &str = "family,method,sweep_value,seed,mse_db,wall_time_ms,iterations";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    MseVsPilots,
    MseVsSnr,
    MseVsIter,
    MseVsP,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::MseVsPilots, Family::MseVsSnr, Family::MseVsIter, Family::MseVsP];

    pub fn name(self) -> &'static str {
        match self {
            Family::MseVsPilots => "mse_vs_pilots",
            Family::MseVsSnr => "mse_vs_snr",
            Family::MseVsIter => "mse_vs_iter",
            Family::MseVsP => "mse_vs_p",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Family::MseVsPilots => "MSE versus number of evenly spaced pilots",
            Family::MseVsSnr => "MSE versus SNR in dB",
            Family::MseVsIter => "MSE versus iteration index",
            Family::MseVsP => "MSE versus neighbor-sharing probability p",
        }
    }

    /// Default sweep grid.
    pub fn default_sweep(self, fixed: &SystemConfig) -> Vec<f64> {
        match self {
            Family::MseVsPilots => vec![24.0, 28.0, 32.0, 36.0, 40.0],
            Family::MseVsSnr => vec![0.0, 4.0, 8.0, 12.0, 16.0, 20.0],
            Family::MseVsIter => (1..=fixed.max_iters).map(|t| t as f64).collect(),
            Family::MseVsP => vec![0.5, 0.6, 0.7, 0.8, 0.9, 1.0],
        }
    }

    /// Config for one sweep point. Iteration sweeps share a single run.
    fn apply(self, fixed: &SystemConfig, value: f64) -> Result<SystemConfig> {
        let mut cfg = fixed.clone();
        match self {
            Family::MseVsPilots => cfg.n_pilots = as_count(value, "pilot count")?,
            Family::MseVsSnr => cfg.snr_db = value,
            Family::MseVsIter => {}
            Family::MseVsP => cfg.p = value,
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn as_count(v: f64, what: &str) -> Result<usize> {
    if v >= 1.0 && v.fract() == 0.0 && v.is_finite() {
        Ok(v as usize)
    } else {
        Err(Error::Config(format!("{what} must be a positive integer, got {v}")))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment family `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    DirichletMp,
    Baseline(BaselineKind),
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::DirichletMp,
        Method::Baseline(BaselineKind::Separate),
        Method::Baseline(BaselineKind::GivenCluster),
        Method::Baseline(BaselineKind::ScsArray),
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::DirichletMp => "DirichletMP",
            Method::Baseline(k) => k.name(),
        }
    }

    /// Runs this method on a scenario, reporting the state after each iteration.
    pub fn run_observed<F>(self, config: &SystemConfig, scenario: &Scenario, observer: F) -> Result<EstimateReport>
    where
        F: FnMut(usize, &EstimatorState),
    {
        match self {
            Method::DirichletMp => {
                run_observed(&EstimatorOptions::dirichlet(config), &scenario.observation, observer)
            }
            Method::Baseline(kind) => run_baseline_observed(
                kind,
                config,
                &scenario.observation,
                &scenario.cluster_map,
                observer,
            ),
        }
    }

    pub fn run(self, config: &SystemConfig, scenario: &Scenario) -> Result<EstimateReport> {
        self.run_observed(config, scenario, |_, _| {})
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Method::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown method `{s}`")))
    }
}

/// Parses a comma-separated method list.
pub fn parse_methods(list: &str) -> Result<Vec<Method>> {
    let methods = list
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect::<Result<Vec<Method>>>()?;
    if methods.is_empty() {
        return Err(Error::Config("method list is empty".into()));
    }
    Ok(methods)
}

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub family: Family,
    pub sweep: Vec<f64>,
    pub fixed: SystemConfig,
    pub methods: Vec<Method>,
    pub n_seeds: usize,
    pub master_seed: u64,
    /// Fill `wall_time_ms`; off by default so reports are reproducible.
    pub record_timing: bool,
}

impl ExperimentSpec {
    pub fn new(family: Family, fixed: SystemConfig, methods: Vec<Method>, n_seeds: usize, master_seed: u64) -> Self {
        Self {
            family,
            sweep: family.default_sweep(&fixed),
            fixed,
            methods,
            n_seeds,
            master_seed,
            record_timing: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sweep.is_empty() {
            return Err(Error::Config("sweep is empty".into()));
        }
        if self.n_seeds == 0 {
            return Err(Error::Config("at least one seed is required".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::Config("no methods requested".into()));
        }
        if self.family == Family::MseVsIter {
            for &v in &self.sweep {
                as_count(v, "iteration index")?;
            }
        }
        for &v in &self.sweep {
            self.family.apply(&self.fixed, v)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub family: Family,
    pub method: Method,
    pub sweep_value: f64,
    pub seed: u64,
    /// NaN marks a failed run.
    pub mse_db: f64,
    pub wall_time_ms: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExperimentReport {
    pub rows: Vec<ReportRow>,
}

impl ExperimentReport {
    pub fn failed_runs(&self) -> usize {
        self.rows.iter().filter(|r| r.mse_db.is_nan()).count()
    }

    /// Rows for one method and sweep point.
    pub fn select(&self, method: Method, sweep_value: f64) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(move |r| r.method == method && r.sweep_value == sweep_value)
    }

    /// Mean of `mse_db` over successful seeds.
    pub fn mean_mse_db(&self, method: Method, sweep_value: f64) -> Option<f64> {
        let vals: Vec<f64> =
            self.select(method, sweep_value).map(|r| r.mse_db).filter(|v| !v.is_nan()).collect();
        (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64)
    }

    fn sort(&mut self) {
        self.rows.sort_by(|a, b| {
            (a.family, a.method.name())
                .cmp(&(b.family, b.method.name()))
                .then(a.sweep_value.total_cmp(&b.sweep_value))
                .then(a.seed.cmp(&b.seed))
        });
    }
}

/// Normalized tap-domain MSE in dB:
/// 10 log10(Σ_m ‖α̂_m − α_m‖² / Σ_m ‖α_m‖²), floored at [`MSE_FLOOR_DB`].
pub fn compute_mse(estimate: &EstimateReport, truth: &ChannelRealization) -> Result<f64> {
    mse_db(&estimate.alpha_hat, &truth.taps)
}

pub fn mse_db(estimate: &CMatrix, truth: &CMatrix) -> Result<f64> {
    if estimate.rows() != truth.rows() || estimate.cols() != truth.cols() {
        return Err(Error::Domain(format!(
            "estimate is {}x{}, truth is {}x{}",
            estimate.rows(),
            estimate.cols(),
            truth.rows(),
            truth.cols()
        )));
    }
    let energy: f64 = truth.as_slice().iter().map(|t| t.norm_sqr()).sum();
    if !(energy > 0.0) {
        return Err(Error::Domain("true channel has zero energy".into()));
    }
    let err: f64 =
        estimate.as_slice().iter().zip(truth.as_slice()).map(|(a, b)| (a - b).norm_sqr()).sum();
    let db = 10.0 * (err / energy).log10();
    Ok(if db.is_nan() { db } else { db.max(MSE_FLOOR_DB) })
}

fn run_cell(spec: &ExperimentSpec, seed_index: usize, sweep_value: Option<f64>) -> Result<Vec<ReportRow>> {
    let scenario_seed = rng::split(spec.master_seed, seed_index as u64);
    let seed = seed_index as u64;
    let mut rows = Vec::new();
    if let Some(value) = sweep_value {
        let cfg = spec.family.apply(&spec.fixed, value)?;
        let scenario = simulate(&cfg, scenario_seed)?;
        for &method in &spec.methods {
            let start = Instant::now();
            let outcome = method
                .run(&cfg, &scenario)
                .and_then(|rep| Ok((compute_mse(&rep, &scenario.realization)?, rep.iterations_run)));
            let wall = if spec.record_timing { start.elapsed().as_secs_f64() * 1e3 } else { 0.0 };
            let (mse_db, iterations) = outcome.unwrap_or_else(|e| {
                log::warn!("{} failed for seed {seed} at {value}: {e}", method.name());
                (f64::NAN, 0)
            });
            rows.push(ReportRow { family: spec.family, method, sweep_value: value, seed, mse_db, wall_time_ms: wall, iterations });
        }
    } else {
        // iteration sweep: one run per method, sampled at each requested index
        let mut cfg = spec.fixed.clone();
        let wanted: Vec<usize> = spec.sweep.iter().map(|&v| v as usize).collect();
        cfg.max_iters = wanted.iter().copied().max().unwrap_or(1);
        cfg.validate()?;
        let scenario = simulate(&cfg, scenario_seed)?;
        let truth = &scenario.realization.taps;
        for &method in &spec.methods {
            let start = Instant::now();
            let mut samples: Vec<(usize, f64, f64)> = Vec::new();
            let result = method.run_observed(&cfg, &scenario, |t, state| {
                if wanted.contains(&t) {
                    let mse = mse_db(&state.alpha_means(), truth).unwrap_or(f64::NAN);
                    samples.push((t, mse, start.elapsed().as_secs_f64() * 1e3));
                }
            });
            if let Err(e) = &result {
                log::warn!("{} failed for seed {seed}: {e}", method.name());
            }
            for &t in &wanted {
                let hit = samples.iter().find(|s| s.0 == t).filter(|_| result.is_ok());
                let (mse_db, wall, iterations) = match hit {
                    Some(&(_, mse, wall)) => (mse, if spec.record_timing { wall } else { 0.0 }, t),
                    None => (f64::NAN, 0.0, 0),
                };
                rows.push(ReportRow {
                    family: spec.family,
                    method,
                    sweep_value: t as f64,
                    seed,
                    mse_db,
                    wall_time_ms: wall,
                    iterations,
                });
            }
        }
    }
    Ok(rows)
}

/// Runs every (seed, sweep point, method) combination of `spec`.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    spec.validate()?;
    let cells: Vec<(usize, Option<f64>)> = if spec.family == Family::MseVsIter {
        (0..spec.n_seeds).map(|s| (s, None)).collect()
    } else {
        (0..spec.n_seeds).flat_map(|s| spec.sweep.iter().map(move |&v| (s, Some(v)))).collect()
    };
    let per_cell = par::map_slice(&cells, |&(seed, value)| run_cell(spec, seed, value));
    let mut report = ExperimentReport::default();
    for rows in per_cell {
        report.rows.extend(rows?);
    }
    report.sort();
    Ok(report)
}

/// Writes the report as CSV; failures are counted in a trailing `#` line.
pub fn write_csv<W: Write>(report: &ExperimentReport, mut out: W) -> Result<()> {
    if report.rows.is_empty() {
        return Err(Error::Domain("refusing to write an empty report".into()));
    }
    let mut buf = String::with_capacity(64 * (report.rows.len() + 2));
    buf.push_str(CSV_HEADER);
    buf.push('\n');
    for r in &report.rows {
        use std::fmt::Write as _;
        let _ = writeln!(
            buf,
            "{},{},{},{},{},{},{}",
            r.family.name(),
            r.method.name(),
            r.sweep_value,
            r.seed,
            r.mse_db,
            r.wall_time_ms,
            r.iterations
        );
    }
    let failed = report.failed_runs();
    if failed > 0 {
        buf.push_str(&format!("# failed_runs={failed}\n"));
    }
    out.write_all(buf.as_bytes())?;
    Ok(())
}

pub fn emit_csv(report: &ExperimentReport, path: &Path) -> Result<()> {
    if report.rows.is_empty() {
        return Err(Error::Domain("refusing to write an empty report".into()));
    }
    let file = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(file);
    write_csv(report, &mut w)?;
    w.flush()?;
    Ok(())
}

/// Parses CSV produced by [`write_csv`]; `#` lines are ignored.
pub fn parse_csv(text: &str) -> Result<ExperimentReport> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#') && !l.is_empty());
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        other => return Err(Error::Parse(format!("unexpected CSV header {other:?}"))),
    }
    let bad = |l: &str| Error::Parse(format!("bad CSV record `{l}`"));
    let rows = lines
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 7 {
                return Err(bad(line));
            }
            Ok(ReportRow {
                family: f[0].parse()?,
                method: f[1].parse()?,
                sweep_value: f[2].parse().map_err(|_| bad(line))?,
                seed: f[3].parse().map_err(|_| bad(line))?,
                mse_db: f[4].parse().map_err(|_| bad(line))?,
                wall_time_ms: f[5].parse().map_err(|_| bad(line))?,
                iterations: f[6].parse().map_err(|_| bad(line))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExperimentReport { rows })
}
