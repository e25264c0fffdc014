use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use heatcalc::cli_report::{
    emit_report, find_check, known_ids, render_report, rough_boundary_data, run_sweep, GridSpec, ReportFormat, SweepConfig,
    SweepResult, BOUNDARY_TIME_GRADING, BOUNDARY_T_MAX,
};
use heatcalc::pde_solvers::{solve_elliptic, solve_heat_boundary, solve_heat_forced, BoundaryData, SpaceTimeFunction};
use heatcalc::report::NormReport;
use heatcalc::weighted_spaces::{make_graded_grid, make_time_grid, GridFunction};
use heatcalc::{LabError, Result};

#[derive(Parser)]
#[command(name = "heatcalc", version, about = "Dirichlet Laplacian on power-weighted Lp spaces: checks, sweeps and solvers")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one check at a single parameter point.
    Check {
        name: String,
        #[arg(long, allow_negative_numbers = true)]
        p: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        gamma: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        lambda: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        t: Option<f64>,
        #[arg(long, allow_negative_numbers = true, default_value_t = 256)]
        n: usize,
        #[arg(long, allow_negative_numbers = true, default_value_t = 40.0)]
        xmax: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 2.0)]
        grading: f64,
        /// Any other declared parameter, as name=value.
        #[arg(long = "param", value_parser = parse_kv, allow_hyphen_values = true)]
        extra: Vec<(String, f64)>,
    },
    /// Run a sweep config and write sweep.{json,csv,dat} into its output_dir.
    Sweep { config: PathBuf },
    /// Solve one problem and print its norm report as JSON.
    Solve {
        #[arg(value_enum)]
        problem: Problem,
        #[arg(long, allow_negative_numbers = true, default_value_t = 2.0)]
        p: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 2.0)]
        gamma: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 2.0)]
        q: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        mu: f64,
        /// Hölder exponent of the boundary data t^alpha.
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.3)]
        alpha: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 256)]
        n: usize,
        #[arg(long, allow_negative_numbers = true, default_value_t = 40.0)]
        xmax: f64,
        /// Time nodes for heat and boundary.
        #[arg(long, allow_negative_numbers = true)]
        nt: Option<usize>,
        /// Write the solution as CSV (with a JSON sidecar for space-time problems).
        #[arg(long, allow_negative_numbers = true)]
        out: Option<PathBuf>,
    },
    /// Re-emit a saved sweep result.
    Report {
        result: PathBuf,
        #[arg(long, default_value = "csv")]
        format: String,
        /// Directory to write sweep.<ext> into; stdout when absent.
        #[arg(long, allow_negative_numbers = true)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Problem {
    Elliptic,
    Heat,
    Boundary,
}

fn parse_kv(s: &str) -> std::result::Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected name=value, got `{s}`"))?;
    let v = v.parse::<f64>().map_err(|e| format!("{v}: {e}"))?;
    Ok((k.trim().to_string(), v))
}

fn exit_for(ok: bool) -> ExitCode {
    ExitCode::from(if ok { 0 } else { 1 })
}

fn print_report(rep: &NormReport) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(rep)?);
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Check { name, p, gamma, lambda, t, n, xmax, grading, extra } => {
            let check = find_check(&name)
                .ok_or_else(|| LabError::Config(format!("unknown check `{name}`; known checks: {}", known_ids().join(", "))))?;
            let mut lattice: BTreeMap<String, Vec<f64>> = BTreeMap::new();
            for (k, v) in [("p", p), ("gamma", gamma), ("lambda", lambda), ("t", t)] {
                if let Some(v) = v {
                    lattice.insert(k.to_string(), vec![v]);
                }
            }
            for (k, v) in extra {
                lattice.insert(k, vec![v]);
            }
            let cfg = SweepConfig {
                checks: vec![check.id.to_string()],
                lattice,
                grid: GridSpec { n, x_max: xmax, grading },
                output_dir: std::env::temp_dir().join("heatcalc-check"),
                ..Default::default()
            };
            let res = run_sweep(&cfg)?;
            for row in &res.rows {
                println!("{}", serde_json::to_string_pretty(row)?);
                println!("{}: {}", row.check, row.pass.as_str().to_uppercase());
            }
            Ok(exit_for(res.all_ok()))
        }
        Cmd::Sweep { config } => {
            let cfg = SweepConfig::load(&config)?;
            let res = run_sweep(&cfg)?;
            for fmt in [ReportFormat::Json, ReportFormat::Csv, ReportFormat::GnuplotDat] {
                let path = emit_report(&res, fmt, &cfg.output_dir, true)?;
                eprintln!("wrote {}", path.display());
            }
            let failed = res.rows.iter().filter(|r| !r.pass.is_ok()).count();
            eprintln!("{} rows, {failed} failed", res.rows.len());
            Ok(exit_for(failed == 0))
        }
        Cmd::Solve { problem, p, gamma, lambda, q, mu, alpha, n, xmax, nt, out } => {
            let mut params = BTreeMap::from([("p".to_string(), p), ("gamma".to_string(), gamma)]);
            match problem {
                Problem::Elliptic => {
                    let grid = Arc::new(make_graded_grid(n, xmax, 2.0)?);
                    let f = GridFunction::from_fn(&grid, |x| 2.0 * (-x).exp());
                    let (u, rep) = solve_elliptic(&f, lambda, p, gamma)?;
                    if let Some(path) = out {
                        let mut text = String::from("x,u\n");
                        for (x, v) in grid.nodes.iter().zip(&u.values) {
                            text.push_str(&format!("{x:e},{:e}\n", v.re));
                        }
                        std::fs::write(path, text)?;
                    }
                    print_report(&rep)?;
                }
                Problem::Heat => {
                    let sg = Arc::new(make_graded_grid(n, xmax, 2.0)?);
                    let tg = Arc::new(make_time_grid(nt.unwrap_or((n / 4).max(32)), 4.0, 1.0)?);
                    let f = SpaceTimeFunction::from_fn(&tg, &sg, |t, x| (PI * t / 4.0).sin() * x * (-x * x).exp());
                    let (u, rep) = solve_heat_forced(&f, lambda, p, q, gamma, mu)?;
                    params.extend([("lambda".into(), lambda), ("q".into(), q), ("mu".into(), mu)]);
                    if let Some(path) = out {
                        u.export_csv(&path, &params)?;
                    }
                    print_report(&rep)?;
                }
                Problem::Boundary => {
                    let tg = Arc::new(make_time_grid(nt.unwrap_or(n), BOUNDARY_T_MAX, BOUNDARY_TIME_GRADING)?);
                    let g = BoundaryData::from_fn(&tg, rough_boundary_data(alpha))?;
                    let (u, rep) = solve_heat_boundary(&g, p, gamma)?;
                    params.insert("alpha".into(), alpha);
                    if let Some(path) = out {
                        u.export_csv(&path, &params)?;
                    }
                    print_report(&rep)?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Report { result, format, out } => {
            let res = SweepResult::load(&result)?;
            let fmt: ReportFormat = format.parse()?;
            match out {
                Some(dir) => {
                    let path = emit_report(&res, fmt, &dir, true)?;
                    eprintln!("wrote {}", path.display());
                }
                None => print!("{}", render_report(&res, fmt)?),
            }
            Ok(exit_for(res.all_ok()))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("heatcalc: {e}");
            match e {
                LabError::Config(_) | LabError::Argument(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
