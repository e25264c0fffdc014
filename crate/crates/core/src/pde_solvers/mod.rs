//! End-to-end solvers: the resolvent problem with λ-scaling, the forced heat equation,
//! the heat equation with rough Dirichlet data and exponential decay on (0, 1).

mod boundary;
mod heat;

pub use boundary::{
    boundary_kernel, boundary_solution_at, solve_heat_boundary, solve_heat_boundary_with, trace_smoothness, BoundaryData,
    BoundaryOptions,
};
pub use heat::{solve_heat_forced, solve_heat_forced_with, temporal_norm, HeatOptions};

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{arg_err, LabError, Result};
use crate::kernels::{interval_kernel, IntervalSpectrum, MODE_TOLERANCE};
use crate::operators::{apply_resolvent, DEFAULT_LAPLACE_NODES};
use crate::quad::linear_fit;
use crate::report::{GridInfo, NormReport};
use crate::weighted_spaces::{lp_norm, sobolev_seminorm, Geometry, GradedGrid, GridFunction, LebesgueExponent, PowerWeight};

/// u(tᵢ, xⱼ) stored time-major.
#[derive(Clone, Debug)]
pub struct SpaceTimeFunction {
    pub time_grid: Arc<GradedGrid>,
    pub space_grid: Arc<GradedGrid>,
    pub values: Vec<f64>,
}

impl SpaceTimeFunction {
    pub fn new(time_grid: Arc<GradedGrid>, space_grid: Arc<GradedGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != time_grid.n * space_grid.n {
            return arg_err(format!(
                "expected {}x{} values, got {}",
                time_grid.n,
                space_grid.n,
                values.len()
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(LabError::Data("space-time values contain NaN or infinite entries".into()));
        }
        Ok(Self { time_grid, space_grid, values })
    }

    pub fn from_fn(time_grid: &Arc<GradedGrid>, space_grid: &Arc<GradedGrid>, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity(time_grid.n * space_grid.n);
        for &t in &time_grid.nodes {
            values.extend(space_grid.nodes.iter().map(|&x| f(t, x)));
        }
        Self { time_grid: time_grid.clone(), space_grid: space_grid.clone(), values }
    }

    pub fn zeros(time_grid: &Arc<GradedGrid>, space_grid: &Arc<GradedGrid>) -> Self {
        Self::from_fn(time_grid, space_grid, |_, _| 0.0)
    }

    pub fn nt(&self) -> usize {
        self.time_grid.n
    }

    pub fn nx(&self) -> usize {
        self.space_grid.n
    }

    pub fn slice(&self, i: usize) -> &[f64] {
        let nx = self.nx();
        &self.values[i * nx..(i + 1) * nx]
    }

    pub fn slice_function(&self, i: usize) -> GridFunction {
        GridFunction::from_real(&self.space_grid, self.slice(i))
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.nx() + j]
    }

    /// CSV matrix with a header row of x nodes and one row per time node, plus a JSON
    /// sidecar (same stem, `.json`) holding the grids and `params`.
    pub fn export_csv(&self, path: &Path, params: &BTreeMap<String, f64>) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        write!(out, "t\\x")?;
        for x in &self.space_grid.nodes {
            write!(out, ",{x:e}")?;
        }
        writeln!(out)?;
        for (i, t) in self.time_grid.nodes.iter().enumerate() {
            write!(out, "{t:e}")?;
            for v in self.slice(i) {
                write!(out, ",{v:e}")?;
            }
            writeln!(out)?;
        }
        out.flush()?;
        #[derive(Serialize)]
        struct Sidecar<'a> {
            params: &'a BTreeMap<String, f64>,
            time_grid: GridInfo,
            space_grid: GridInfo,
        }
        let sidecar = Sidecar {
            params,
            time_grid: GridInfo::from(&*self.time_grid),
            space_grid: GridInfo::from(&*self.space_grid),
        };
        std::fs::write(path.with_extension("json"), serde_json::to_string_pretty(&sidecar)?)?;
        Ok(())
    }
}

/// Rejects γ outside (−1, 2p−1) and the listed excluded values.
pub(crate) fn check_gamma(p: f64, gamma: f64, excluded: &[f64]) -> Result<()> {
    if !(gamma > -1.0 && gamma < 2.0 * p - 1.0) {
        return Err(LabError::Range(format!("gamma = {gamma} outside (-1, {})", 2.0 * p - 1.0)));
    }
    for &e in excluded {
        if (gamma - e).abs() < 1e-12 {
            return Err(LabError::ExcludedExponent(format!("gamma = {gamma} is excluded at p = {p}")));
        }
    }
    Ok(())
}

/// u = (λ − Δ)^{-1} f with the report value Σ_{j≤2} λ^{1−j/2}‖u^{(j)}‖ / ‖f‖ in Lᵖ(w_γ).
pub fn solve_elliptic(f: &GridFunction, lambda: f64, p: f64, gamma: f64) -> Result<(GridFunction, NormReport)> {
    LebesgueExponent::new(p)?;
    if !(lambda > 0.0) {
        return Err(LabError::Solvability(format!("λ = {lambda}: 0 and the negative axis lie in the spectrum of the half-line Laplacian")));
    }
    check_gamma(p, gamma, &[p - 1.0])?;
    let w = PowerWeight::half_line(gamma);
    let u = apply_resolvent(f, C64::new(lambda, 0.0), &w, DEFAULT_LAPLACE_NODES)?;
    let f_norm = lp_norm(f, p, &w)?;
    let norms = [
        lp_norm(&u, p, &w)?,
        sobolev_seminorm(&u, 1, p, &w)?.value,
        sobolev_seminorm(&u, 2, p, &w)?.value,
    ];
    let total: f64 = norms.iter().enumerate().map(|(j, v)| lambda.powf(1.0 - j as f64 / 2.0) * v).sum();
    let value = if f_norm == 0.0 { 0.0 } else { total / f_norm };
    let report = NormReport::new("elliptic_scaling", GridInfo::from(&*f.grid), value)
        .param("p", p)
        .param("gamma", gamma)
        .param("lambda", lambda)
        .param("f_norm", f_norm)
        .param("u_norm", norms[0])
        .param("du_norm", norms[1])
        .param("d2u_norm", norms[2]);
    Ok((u, report))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayFit {
    pub rate: f64,
    pub intercept: f64,
    /// RMS residual of the log-norm fit.
    pub residual: f64,
    pub times: Vec<f64>,
    pub log_norms: Vec<f64>,
}

pub const DECAY_SAMPLES: usize = 21;

/// Residual (relative to the total log drop over the window) above which the fit is
/// rejected as polluted by higher modes.
pub const DECAY_RESIDUAL_TOLERANCE: f64 = 1e-4;

/// Least-squares slope of log‖T(t)f₀‖ in Lᵖ(w_γ) on (0, 1) over the window.
pub fn interval_decay_fit(f0: &GridFunction, p: f64, gamma: f64, t_window: (f64, f64)) -> Result<DecayFit> {
    LebesgueExponent::new(p)?;
    check_gamma(p, gamma, &[p - 1.0])?;
    let grid = &f0.grid;
    if grid.geometry != Geometry::Interval {
        return arg_err("decay rates are measured on an interval grid");
    }
    if f0.value_dim != 1 || !f0.is_finite() {
        return Err(LabError::Data("need finite scalar initial data".into()));
    }
    let (t0, t1) = t_window;
    if !(t0 > 0.0 && t1 > t0) {
        return arg_err(format!("window ({t0}, {t1}) must satisfy 0 < t0 < t1"));
    }
    let spectrum = IntervalSpectrum::new(IntervalSpectrum::modes_needed(t0, MODE_TOLERANCE))?;
    let w = PowerWeight::interval(gamma);
    let n = grid.n;
    let weighted: Vec<f64> = (0..n).map(|j| grid.quad_weights[j] * f0.values[j].re).collect();
    let mut times = Vec::with_capacity(DECAY_SAMPLES);
    let mut log_norms = Vec::with_capacity(DECAY_SAMPLES);
    for k in 0..DECAY_SAMPLES {
        let t = t0 + (t1 - t0) * k as f64 / (DECAY_SAMPLES - 1) as f64;
        let mut u = vec![0.0; n];
        for (i, ui) in u.iter_mut().enumerate() {
            let mut s = 0.0;
            for (j, wj) in weighted.iter().enumerate() {
                s += interval_kernel(t, grid.nodes[i], grid.nodes[j], &spectrum)?.value * wj;
            }
            *ui = s;
        }
        let norm = lp_norm(&GridFunction::from_real(grid, &u), p, &w)?;
        if !(norm > 0.0) {
            return Err(LabError::Data(format!("T(t)f0 vanished at t = {t}")));
        }
        times.push(t);
        log_norms.push(norm.ln());
    }
    let (rate, intercept, residual) = linear_fit(&times, &log_norms);
    let drop = (log_norms[0] - log_norms[DECAY_SAMPLES - 1]).abs().max(f64::MIN_POSITIVE);
    if residual / drop > DECAY_RESIDUAL_TOLERANCE {
        // Mode 2 falls below 1e-4 of mode 1 once 3π²t > ln 1e4.
        let suggest = (1e4f64).ln() / (3.0 * std::f64::consts::PI.powi(2));
        return Err(LabError::FitResidual {
            residual,
            suggestion: format!("higher modes still visible; start the window at t0 >= {suggest:.2}"),
        });
    }
    Ok(DecayFit { rate, intercept, residual, times, log_norms })
}

pub fn interval_decay_rate(f0: &GridFunction, p: f64, gamma: f64, t_window: (f64, f64)) -> Result<f64> {
    Ok(interval_decay_fit(f0, p, gamma, t_window)?.rate)
}
