//! Randomized and deterministic sweeps that compare measured spectra with
//! the closed-form bounds, plus CSV/JSON report writers.
//!
//! Every trial draws from its own ChaCha stream keyed by `(seed, grid
//! point, trial)`, so output does not depend on the worker count.

mod format;
mod sampling;
mod sweeps;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bounds::{BoundReport, ClumpConstants};
use crate::core_matrix::ComplexDense;
use crate::error::{Error, Result};
use crate::spectral::{summarize, SpectralOptions, SpectralSummary};

pub use format::fmt_sig12;
pub use sampling::{boundary_uniform, separated_nodes};
pub use sweeps::{
    benchmark_comparison, clump_experiment, dft_node_probe, figure1_sweep, freq_stability_sweep,
    node_stability_sweep, random_frequency_perturbation, wellsep_sweep,
};

/// Absolute slack allowed before a measured value counts as a violation.
pub const VIOLATION_SLACK: f64 = 1e-9;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "FOURSTAB_THREADS";

fn default_trials() -> usize {
    100
}

/// Settings shared by every sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    /// Matrix size above which only the extremes are computed iteratively.
    #[serde(default)]
    pub crossover: Option<usize>,
    /// Convergence tolerance of the iterative path.
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
    /// Where offending matrices are written when a bound is violated.
    #[serde(default)]
    pub dump_dir: Option<PathBuf>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: default_trials(),
            crossover: None,
            tol: None,
            output_path: None,
            dump_dir: None,
        }
    }
}

impl SweepConfig {
    pub fn with_seed(seed: u64, trials: usize) -> Self {
        Self {
            seed,
            trials,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidInput("trials must be >= 1".into()));
        }
        if let Some(tol) = self.tol {
            if !(tol > 0.0) {
                return Err(Error::InvalidInput(format!("tol must be positive, got {tol}")));
            }
        }
        Ok(())
    }

    pub fn spectral_options(&self) -> SpectralOptions<f64> {
        let mut opts = SpectralOptions::default();
        if let Some(c) = self.crossover {
            opts.crossover = c;
        }
        if let Some(t) = self.tol {
            opts.tol = t;
        }
        opts
    }

    fn measure(&self, a: &ComplexDense<f64>) -> Result<SpectralSummary<f64>> {
        summarize(a, &self.spectral_options())
    }

    fn dump_dir(&self) -> PathBuf {
        self.dump_dir
            .clone()
            .unwrap_or_else(|| std::env::temp_dir().join("fourstab-violations"))
    }
}

/// Measured extremes checked against one bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub label: String,
    pub applicable: bool,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub lower_holds: Option<bool>,
    pub upper_holds: Option<bool>,
    /// Sides that count towards violations; the others are reported only.
    pub assert_lower: bool,
    pub assert_upper: bool,
}

impl BoundCheck {
    pub fn new(label: &str, lower: Option<f64>, upper: Option<f64>, sigma_min: f64, sigma_max: f64) -> Self {
        Self {
            label: label.into(),
            applicable: true,
            lower,
            upper,
            lower_holds: lower.map(|b| sigma_min >= b - VIOLATION_SLACK),
            upper_holds: upper.map(|b| sigma_max <= b + VIOLATION_SLACK),
            assert_lower: true,
            assert_upper: true,
        }
    }

    /// Checks the `σ`-scale bounds of a report; inapplicable reports
    /// never violate.
    pub fn from_report(label: &str, report: &BoundReport, sigma_min: f64, sigma_max: f64) -> Self {
        if !report.applicable {
            return Self {
                label: label.into(),
                applicable: false,
                lower: None,
                upper: None,
                lower_holds: None,
                upper_holds: None,
                assert_lower: true,
                assert_upper: true,
            };
        }
        Self::new(label, report.lower_sigma(), report.upper_sigma(), sigma_min, sigma_max)
    }

    pub fn informational_lower(mut self) -> Self {
        self.assert_lower = false;
        self
    }

    pub fn violated(&self) -> bool {
        self.applicable
            && ((self.assert_lower && self.lower_holds == Some(false))
                || (self.assert_upper && self.upper_holds == Some(false)))
    }
}

/// One trial of one sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub trial: usize,
    pub params: BTreeMap<String, f64>,
    pub sigma_min: Option<f64>,
    pub sigma_max: Option<f64>,
    pub checks: Vec<BoundCheck>,
    pub violation: bool,
    /// Matrix written for triage when `violation` is set.
    pub dump_path: Option<String>,
    pub wall_time_s: f64,
}

impl SweepRecord {
    fn new(trial: usize, params: BTreeMap<String, f64>, sigma: Option<(f64, f64)>, checks: Vec<BoundCheck>) -> Self {
        let violation = checks.iter().any(BoundCheck::violated);
        Self {
            trial,
            params,
            sigma_min: sigma.map(|s| s.0),
            sigma_max: sigma.map(|s| s.1),
            checks,
            violation,
            dump_path: None,
            wall_time_s: 0.0,
        }
    }

    pub fn param(&self, key: &str) -> Option<f64> {
        self.params.get(key).copied()
    }

    pub fn check(&self, label: &str) -> Option<&BoundCheck> {
        self.checks.iter().find(|c| c.label == label)
    }

    pub fn kappa(&self) -> Option<f64> {
        match (self.sigma_min, self.sigma_max) {
            (Some(lo), Some(hi)) => Some(if lo > 0.0 { hi / lo } else { f64::INFINITY }),
            _ => None,
        }
    }
}

/// Output of one sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub experiment: String,
    pub config: Value,
    pub records: Vec<SweepRecord>,
    pub violations: usize,
    /// Sweep-level statistics (fitted slopes, counters).
    pub summary: BTreeMap<String, f64>,
    pub wall_time_s: f64,
}

impl SweepReport {
    fn new(experiment: &str, config: Value, records: Vec<SweepRecord>, started: std::time::Instant) -> Self {
        let violations = records.iter().filter(|r| r.violation).count();
        Self {
            experiment: experiment.into(),
            config,
            records,
            violations,
            summary: BTreeMap::new(),
            wall_time_s: started.elapsed().as_secs_f64(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// CSV with a header row and 12 significant digits; wall times are left
    /// out so identical configurations give identical bytes.
    pub fn to_csv_string(&self) -> String {
        format::records_csv(&self.records)
    }

    /// Writes CSV or JSON depending on the extension of `path`.
    pub fn write(&self, path: &Path) -> Result<()> {
        let text = match path.extension().and_then(|e| e.to_str()) {
            Some("json") => self.to_json_string(),
            _ => self.to_csv_string(),
        };
        std::fs::write(path, text)?;
        Ok(())
    }
}

/// Named sweep with its parameters, as read from a JSON config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "experiment", rename_all = "snake_case", deny_unknown_fields)]
pub enum ExperimentRequest {
    Figure1 {
        n_list: Vec<usize>,
    },
    FreqStability {
        m: Vec<usize>,
        ell_grid: Vec<f64>,
        #[serde(default)]
        rank_one: bool,
    },
    NodeStability {
        #[serde(rename = "L")]
        rows: usize,
        #[serde(rename = "N")]
        n: usize,
        ell_grid: Vec<f64>,
    },
    Wellsep {
        #[serde(rename = "L_grid")]
        l_grid: Vec<usize>,
    },
    Benchmark {
        m: Vec<usize>,
    },
    Clump {
        #[serde(rename = "L")]
        rows: usize,
        #[serde(rename = "N")]
        n: usize,
        alpha_grid: Vec<f64>,
        lambda: usize,
        #[serde(default)]
        constants: ClumpConstants,
    },
    DftNodeProbe {
        #[serde(rename = "N")]
        n: usize,
        ell_grid: Vec<f64>,
    },
}

impl ExperimentRequest {
    pub fn run(&self, cfg: &SweepConfig) -> Result<SweepReport> {
        match self {
            Self::Figure1 { n_list } => figure1_sweep(n_list, cfg),
            Self::FreqStability { m, ell_grid, rank_one } => freq_stability_sweep(m, ell_grid, *rank_one, cfg),
            Self::NodeStability { rows, n, ell_grid } => node_stability_sweep(*rows, *n, ell_grid, cfg),
            Self::Wellsep { l_grid } => wellsep_sweep(l_grid, cfg),
            Self::Benchmark { m } => benchmark_comparison(m, cfg),
            Self::Clump {
                rows,
                n,
                alpha_grid,
                lambda,
                constants,
            } => clump_experiment(*rows, *n, alpha_grid, *lambda, *constants, cfg),
            Self::DftNodeProbe { n, ell_grid } => dft_node_probe(*n, ell_grid, cfg),
        }
    }
}

/// RNG for one trial: the seed picks the key, `(grid, trial)` the stream.
pub fn trial_rng(seed: u64, grid: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((grid as u64) << 32) | trial as u64);
    rng
}

/// Worker count from `FOURSTAB_THREADS`, or rayon's default.
pub fn worker_count() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

/// Runs `job` on every `(grid, trial)` pair in parallel and returns the
/// results in grid-major order.
fn run_trials<F>(grid_len: usize, trials: usize, job: F) -> Result<Vec<SweepRecord>>
where
    F: Fn(usize, usize) -> Result<SweepRecord> + Sync + Send,
{
    let jobs: Vec<(usize, usize)> = (0..grid_len)
        .flat_map(|g| (0..trials).map(move |t| (g, t)))
        .collect();
    let work = || {
        jobs.par_iter()
            .map(|&(g, t)| {
                let started = std::time::Instant::now();
                job(g, t).map(|mut r| {
                    r.wall_time_s = started.elapsed().as_secs_f64();
                    r
                })
            })
            .collect::<Vec<_>>()
    };
    let results = match worker_count() {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidInput(format!("cannot build worker pool: {e}")))?
            .install(work),
        None => work(),
    };
    results.into_iter().collect()
}

/// Writes the matrix behind a violated record and remembers the path.
fn dump_violation(cfg: &SweepConfig, name: &str, grid: usize, record: &mut SweepRecord, a: &ComplexDense<f64>) {
    if !record.violation {
        return;
    }
    let dir = cfg.dump_dir();
    let path = dir.join(format!("{name}-{grid}-{}.json", record.trial));
    let written = std::fs::create_dir_all(&dir).is_ok() && a.write_json(&path).is_ok();
    if written {
        record.dump_path = Some(path.display().to_string());
    }
}
