//! Mutation-rate sweeps and their CSV/JSON reports.
//!
//! Trials are independent and seeded by [`trial_seed`]`(master_seed, trial)`.
//! They may run on any number of threads; results are collected by trial
//! index and reduced sequentially, so the output does not depend on the
//! schedule.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ea::{run, trial_seed, MutationRate, RunOptions, RunRecord};
use crate::error::{Error, Result};
use crate::fitness::{Instance, PathLength};
use crate::theory::{predicted_runtime_for_length, root_z, ModelParams, DEFAULT_TOL};

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "HILLPATH_OUTPUT_DIR";

/// Default grid resolution for `c`.
pub const DEFAULT_GRID_STEP: f64 = 0.25;

/// `start, start + step, …` up to and including `stop`.
pub fn c_grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    assert!(step > 0.0);
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    (0..count)
        .map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub n: usize,
    pub k: usize,
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    pub path_len: Option<u128>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    pub c_grid: Vec<f64>,
    pub trials_per_c: u64,
    pub master_seed: u64,
    /// Generation cap per run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    /// CSV destination; the JSON report goes next to it with a `.json` extension.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
    /// Worker threads; `None` uses all available cores.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

impl SweepConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn path_length(&self) -> Result<PathLength> {
        match (self.path_len, self.a) {
            (Some(l), None) => Ok(PathLength::Explicit(l)),
            (None, Some(a)) => Ok(PathLength::Coefficient(a)),
            _ => Err(Error::Config("exactly one of L and a must be given".into())),
        }
    }

    pub fn instance(&self) -> Result<Instance> {
        Instance::new(self.n, self.k, self.path_length()?)
    }

    pub fn validate(&self) -> Result<()> {
        self.path_length()?;
        if self.trials_per_c == 0 {
            return Err(Error::Config("trials_per_c must be at least 1".into()));
        }
        let n = self.n as f64;
        if let Some(&c) = self.c_grid.iter().find(|&&c| !(c > 0.0 && c < n)) {
            return Err(Error::Config(format!("c = {c} is outside (0, n)")));
        }
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be at least 1".into()));
        }
        Ok(())
    }

    fn sorted_grid(&self) -> Vec<f64> {
        let mut grid = self.c_grid.clone();
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        grid
    }
}

/// Aggregate over the trials at one `c`. Means cover completed runs only.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub c: f64,
    pub trials: u64,
    /// Runs that hit the budget before reaching `x*`.
    pub truncated: u64,
    pub mean_t: Option<f64>,
    /// Standard error of `mean_t`; undefined for fewer than two runs.
    pub stderr_t: Option<f64>,
    /// Mean generations from path entry to reaching `x+` or `x*`.
    pub mean_path_phase: Option<f64>,
    /// Mean generations from `x+` to `x*`, counting early jumps as zero.
    pub mean_jump_wait: Option<f64>,
    pub early_jumps: u64,
    pub predicted_t: f64,
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub n: usize,
    pub k: usize,
    #[serde(rename = "L")]
    pub path_len: u128,
    pub a_eff: f64,
    /// Minimizer of the runtime model over `c`.
    pub model_c_star: f64,
    pub rows: Vec<SweepRow>,
    /// Grid value with the smallest mean runtime.
    pub empirical_c_star: Option<f64>,
}

fn mean(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

fn std_err(values: &[f64]) -> Option<f64> {
    if values.len() < 2 {
        return None;
    }
    let m = mean(values)?;
    let ss: f64 = values.iter().map(|v| (v - m) * (v - m)).sum();
    Some((ss / (values.len() - 1) as f64).sqrt() / (values.len() as f64).sqrt())
}

/// Reduces the records of one grid point, in trial order.
pub fn aggregate(inst: &Instance, c: f64, records: &[RunRecord]) -> Result<SweepRow> {
    let done: Vec<&RunRecord> = records.iter().filter(|r| !r.truncated()).collect();
    let totals: Vec<f64> = done.iter().map(|r| r.steps_total as f64).collect();
    let paths: Vec<f64> = done
        .iter()
        .map(|r| r.path_phase().unwrap_or(0) as f64)
        .collect();
    let jumps: Vec<f64> = done
        .iter()
        .map(|r| r.jump_wait.unwrap_or(0) as f64)
        .collect();
    let predicted_t =
        predicted_runtime_for_length(inst.path_len() as f64, inst.n() as f64, inst.k() as u32, c)?;
    let mean_t = mean(&totals);
    Ok(SweepRow {
        c,
        trials: records.len() as u64,
        truncated: (records.len() - done.len()) as u64,
        mean_t,
        stderr_t: std_err(&totals),
        mean_path_phase: mean(&paths),
        mean_jump_wait: mean(&jumps),
        early_jumps: done.iter().filter(|r| r.early_jump).count() as u64,
        predicted_t,
        ratio: mean_t.map(|m| m / predicted_t),
    })
}

fn empirical_argmin(rows: &[SweepRow]) -> Option<f64> {
    rows.iter()
        .filter_map(|r| Some((r.c, r.mean_t?)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(c, _)| c)
}

/// Runs `trials` seeded runs at rate `c/n`, in trial order.
pub fn run_trials(
    inst: &Instance,
    c: f64,
    trials: u64,
    master_seed: u64,
    opts: RunOptions,
    pool: &rayon::ThreadPool,
) -> Result<Vec<RunRecord>> {
    let rate = MutationRate::from_c(c, inst.n())?;
    Ok(pool.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|t| run(inst, rate, trial_seed(master_seed, t), opts))
            .collect()
    }))
}

pub fn thread_pool(threads: Option<usize>) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker threads: {e}")))
}

/// Runs the sweep. When `output_path` is set the CSV and JSON reports are
/// rewritten after every grid point, so an interrupted sweep leaves the
/// completed rows on disk.
pub fn sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let inst = cfg.instance()?;
    let pool = thread_pool(cfg.threads)?;
    let opts = RunOptions {
        budget: cfg.budget,
        ..Default::default()
    };
    let a_eff = inst.effective_a();
    let mut result = SweepResult {
        n: inst.n(),
        k: inst.k(),
        path_len: inst.path_len(),
        a_eff,
        model_c_star: root_z(&ModelParams::new(a_eff, inst.k() as u32)?, DEFAULT_TOL)?,
        rows: Vec::new(),
        empirical_c_star: None,
    };
    for c in cfg.sorted_grid() {
        let records = run_trials(&inst, c, cfg.trials_per_c, cfg.master_seed, opts, &pool)?;
        result.rows.push(aggregate(&inst, c, &records)?);
        result.empirical_c_star = empirical_argmin(&result.rows);
        if let Some(path) = &cfg.output_path {
            write_reports(&result, path)?;
        }
    }
    Ok(result)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

pub const CSV_COLUMNS: [&str; 9] = [
    "c",
    "trials",
    "mean_T",
    "stderr_T",
    "mean_path_phase",
    "mean_jump_wait",
    "early_jumps",
    "predicted_T",
    "ratio",
];

#[derive(Serialize)]
struct CsvRow {
    c: f64,
    trials: u64,
    mean_t: Option<f64>,
    stderr_t: Option<f64>,
    mean_path_phase: Option<f64>,
    mean_jump_wait: Option<f64>,
    early_jumps: u64,
    predicted_t: f64,
    ratio: Option<f64>,
}

/// Serializes a sweep. Undefined statistics are empty CSV fields and JSON nulls.
pub fn report(result: &SweepResult, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(result)?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .has_headers(false)
                .from_writer(Vec::new());
            w.write_record(CSV_COLUMNS)?;
            for r in &result.rows {
                w.serialize(CsvRow {
                    c: r.c,
                    trials: r.trials,
                    mean_t: r.mean_t,
                    stderr_t: r.stderr_t,
                    mean_path_phase: r.mean_path_phase,
                    mean_jump_wait: r.mean_jump_wait,
                    early_jumps: r.early_jumps,
                    predicted_t: r.predicted_t,
                    ratio: r.ratio,
                })?;
            }
            w.into_inner()
                .map_err(|e| Error::io("<csv buffer>", e.into_error()))
        }
    }
}

/// Writes `path` (CSV) and `path` with a `.json` extension.
pub fn write_reports(result: &SweepResult, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, report(result, Format::Csv)?).map_err(|e| Error::io(path, e))?;
    let json = path.with_extension("json");
    fs::write(&json, report(result, Format::Json)?).map_err(|e| Error::io(&json, e))?;
    Ok(())
}

/// `$HILLPATH_OUTPUT_DIR/<file>`, or `<file>` in the working directory.
pub fn default_output_path(file: &str) -> PathBuf {
    std::env::var_os(OUTPUT_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."))
        .join(file)
}

pub const RUN_RECORD_COLUMNS: [&str; 9] = [
    "seed",
    "steps_total",
    "step_path_entry",
    "fitness_at_entry",
    "step_xplus",
    "step_xstar",
    "early_jump",
    "jump_wait",
    "outcome",
];

/// Run records as CSV, one row per record.
pub fn run_records_csv(records: &[RunRecord]) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    w.write_record(RUN_RECORD_COLUMNS)?;
    let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in records {
        w.write_record([
            r.seed.to_string(),
            r.steps_total.to_string(),
            opt(r.step_path_entry),
            r.fitness_at_entry
                .map(|f| f.to_string())
                .unwrap_or_default(),
            opt(r.step_xplus),
            opt(r.step_xstar),
            r.early_jump.to_string(),
            opt(r.jump_wait),
            serde_json::to_value(r.outcome)?
                .as_str()
                .unwrap_or_default()
                .to_string(),
        ])?;
    }
    w.into_inner()
        .map_err(|e| Error::io("<csv buffer>", e.into_error()))
}
