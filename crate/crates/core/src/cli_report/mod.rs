//! Batch runner: sweep configs, per-row dispatch over a worker pool and report emission.

mod checks;
mod config;

pub use checks::{
    all_checks, find_check, known_ids, rough_boundary_data, CheckSpec, CheckValue, Context, Params, BOUNDARY_TIME_GRADING,
    BOUNDARY_T_MAX, DECAY_WINDOW, PARAM_NAMES,
};
pub use config::{GridSpec, Selector, SweepConfig};

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::operators::PROBE_SEED_BASE;
use crate::report::{Outcome, Trend};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub check: String,
    /// Position of the point in the check's lattice enumeration.
    pub index: usize,
    pub params: Params,
    pub value: Option<f64>,
    pub bound: Option<f64>,
    pub pass: Outcome,
    pub trend: Option<Trend>,
    pub runtime_ms: u64,
    pub n: usize,
    #[serde(rename = "X_max")]
    pub x_max: f64,
    pub expect_divergent: bool,
    pub error_class: Option<String>,
    pub error: Option<String>,
    pub detail: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    /// Random probe k of the norm estimator is seeded with `probe_seed_base + k`.
    pub probe_seed_base: u64,
    pub grid: GridSpec,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(|r| r.pass.is_ok())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

/// Worker count from HEATCALC_THREADS, falling back to rayon's default.
fn worker_count() -> Option<usize> {
    std::env::var("HEATCALC_THREADS").ok()?.trim().parse::<usize>().ok().filter(|&n| n > 0)
}

fn ensure_writable(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let probe = dir.join(".heatcalc-write-probe");
    std::fs::write(&probe, b"")?;
    std::fs::remove_file(&probe)?;
    Ok(())
}

struct Job<'a> {
    check: &'static CheckSpec,
    order: usize,
    index: usize,
    params: Params,
    divergent: bool,
    cfg: &'a SweepConfig,
}

fn run_job(job: &Job) -> SweepRow {
    let ctx = Context { grid: &job.cfg.grid, tolerances: &job.cfg.tolerances };
    let start = Instant::now();
    let res = catch_unwind(AssertUnwindSafe(|| (job.check.run)(&job.params, &ctx)))
        .unwrap_or_else(|_| Err(LabError::Data(format!("{} panicked", job.check.id))));
    let runtime_ms = start.elapsed().as_millis() as u64;
    let mut row = SweepRow {
        check: job.check.id.to_string(),
        index: job.index,
        params: job.params.clone(),
        value: None,
        bound: None,
        pass: Outcome::Fail,
        trend: None,
        runtime_ms,
        n: job.cfg.grid.n,
        x_max: job.cfg.grid.x_max,
        expect_divergent: job.divergent,
        error_class: None,
        error: None,
        detail: BTreeMap::new(),
    };
    match res {
        Ok(cv) => {
            row.value = finite(cv.value);
            row.bound = cv.bound.and_then(finite);
            row.trend = cv.trend;
            row.detail = cv.detail.into_iter().filter(|(_, v)| v.is_finite()).collect();
            row.pass = match (job.divergent, cv.divergent) {
                (true, true) => Outcome::ExpectedDivergenceConfirmed,
                (true, false) => Outcome::Fail,
                (false, _) => cv.outcome,
            };
        }
        Err(e) => {
            row.error_class = Some(e.class().to_string());
            row.error = Some(e.to_string());
        }
    }
    row
}

/// Runs every check over its lattice points. Row failures are recorded, never propagated.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    ensure_writable(&config.output_dir)?;
    let mut jobs = Vec::new();
    for (order, id) in config.checks.iter().enumerate() {
        let check = find_check(id).expect("validated");
        for (index, params) in check.points(&config.lattice).into_iter().enumerate() {
            let divergent = config.expect_divergent.iter().any(|s| s.matches(id, &params));
            jobs.push(Job { check, order, index, params, divergent, cfg: config });
        }
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = worker_count() {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| LabError::Config(format!("cannot start worker pool: {e}")))?;
    let mut rows: Vec<(usize, SweepRow)> = pool.install(|| jobs.par_iter().map(|j| (j.order, run_job(j))).collect());
    rows.sort_by_key(|(order, r)| (*order, r.index));
    Ok(SweepResult { probe_seed_base: PROBE_SEED_BASE, grid: config.grid, rows: rows.into_iter().map(|(_, r)| r).collect() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
    GnuplotDat,
}

impl ReportFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
            ReportFormat::GnuplotDat => "dat",
        }
    }
}

impl FromStr for ReportFormat {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            "gnuplot-dat" => Ok(ReportFormat::GnuplotDat),
            _ => Err(LabError::Argument(format!("unsupported report format `{s}`; use csv, json or gnuplot-dat"))),
        }
    }
}

pub const CSV_HEADER: &str = "check,p,gamma,lambda,t,extra_params,value,bound,pass,trend,n,X_max";

const CSV_MAIN: [&str; 4] = ["p", "gamma", "lambda", "t"];

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn trend_str(t: Option<Trend>) -> &'static str {
    t.map(|t| t.as_str()).unwrap_or("")
}

fn csv_row(r: &SweepRow) -> String {
    let mut extra: Vec<String> =
        r.params.iter().filter(|(k, _)| !CSV_MAIN.contains(&k.as_str())).map(|(k, v)| format!("{k}={v}")).collect();
    if let Some(c) = &r.error_class {
        extra.push(format!("error={c}"));
    }
    let main: Vec<String> = CSV_MAIN.iter().map(|k| opt(r.params.get(*k).copied())).collect();
    format!(
        "{},{},{},{},{},{},{},{},{}",
        r.check,
        main.join(","),
        extra.join(";"),
        opt(r.value),
        opt(r.bound),
        r.pass.as_str(),
        trend_str(r.trend),
        r.n,
        r.x_max
    )
}

fn gnuplot_num(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_else(|| "NaN".into())
}

fn gnuplot_block(check: &str, rows: &[&SweepRow]) -> String {
    let names: Vec<&String> = rows[0].params.keys().collect();
    let mut out = format!("# {check}\n# {} value bound pass\n", names.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(" "));
    for r in rows {
        let cols: Vec<String> = names.iter().map(|k| gnuplot_num(r.params.get(*k).copied())).collect();
        let pass = match r.pass {
            Outcome::Fail => 0,
            Outcome::Pass => 1,
            Outcome::ExpectedDivergenceConfirmed => 2,
        };
        let _ = writeln!(out, "{} {} {} {pass}", cols.join(" "), gnuplot_num(r.value), gnuplot_num(r.bound));
    }
    out
}

/// Report text in the given format. Gnuplot output has one block per check in row order,
/// blocks separated by two blank lines so `index` can address them.
pub fn render_report(result: &SweepResult, format: ReportFormat) -> Result<String> {
    Ok(match format {
        ReportFormat::Json => serde_json::to_string_pretty(result)? + "\n",
        ReportFormat::Csv => {
            let mut out = String::from(CSV_HEADER);
            out.push('\n');
            for r in &result.rows {
                out.push_str(&csv_row(r));
                out.push('\n');
            }
            out
        }
        ReportFormat::GnuplotDat => {
            let mut blocks: Vec<(&str, Vec<&SweepRow>)> = Vec::new();
            for r in &result.rows {
                match blocks.iter_mut().find(|(c, _)| *c == r.check) {
                    Some((_, v)) => v.push(r),
                    None => blocks.push((&r.check, vec![r])),
                }
            }
            blocks.iter().map(|(c, rows)| gnuplot_block(c, rows)).collect::<Vec<_>>().join("\n\n")
        }
    })
}

/// Writes `sweep.<ext>` into `dir` and returns its path.
pub fn emit_report(result: &SweepResult, format: ReportFormat, dir: &Path, allow_empty: bool) -> Result<PathBuf> {
    if result.rows.is_empty() && !allow_empty {
        return Err(LabError::Argument("empty sweep result; pass allow_empty to write it anyway".into()));
    }
    std::fs::create_dir_all(dir)?;
    let path = dir.join(format!("sweep.{}", format.extension()));
    std::fs::write(&path, render_report(result, format)?)?;
    Ok(path)
}
