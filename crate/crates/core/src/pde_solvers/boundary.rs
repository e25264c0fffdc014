use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::heat::temporal_norm;
use super::{check_gamma, SpaceTimeFunction};
use crate::error::{arg_err, LabError, Result};
use crate::quad::{GL3_W, GL3_X};
use crate::report::{GridInfo, NormReport};
use crate::weighted_spaces::{
    besov_time_seminorm, fd_derivative, lp_norm, make_graded_grid, Geometry, GradedGrid, GridFunction, LebesgueExponent,
    PowerWeight,
};

/// Dirichlet data g(tᵢ) on a time grid, interpolated piecewise linearly through (0, g(0)).
#[derive(Clone, Debug)]
pub struct BoundaryData {
    pub time_grid: Arc<GradedGrid>,
    pub values: Vec<f64>,
    /// g(0).
    pub initial: f64,
    /// g(0) = 0.
    pub compatibility: bool,
}

impl BoundaryData {
    pub fn new(time_grid: Arc<GradedGrid>, values: Vec<f64>, initial: f64) -> Result<Self> {
        if values.len() != time_grid.n {
            return arg_err(format!("expected {} boundary values, got {}", time_grid.n, values.len()));
        }
        if !initial.is_finite() || values.iter().any(|v| !v.is_finite()) {
            return Err(LabError::Data("boundary data contain NaN or infinite values".into()));
        }
        Ok(Self { time_grid, values, initial, compatibility: initial == 0.0 })
    }

    pub fn from_fn(time_grid: &Arc<GradedGrid>, g: impl Fn(f64) -> f64) -> Result<Self> {
        let values = time_grid.nodes.iter().map(|&t| g(t)).collect();
        Self::new(time_grid.clone(), values, g(0.0))
    }

    fn knots(&self) -> Knots {
        let mut s = vec![0.0];
        s.extend_from_slice(&self.time_grid.nodes);
        let mut v = vec![self.initial];
        v.extend_from_slice(&self.values);
        let slopes = (0..s.len() - 1).map(|k| (v[k + 1] - v[k]) / (s[k + 1] - s[k])).collect();
        Knots { s, v, slopes }
    }

    pub fn as_grid_function(&self) -> GridFunction {
        GridFunction::from_real(&self.time_grid, &self.values)
    }
}

struct Knots {
    s: Vec<f64>,
    v: Vec<f64>,
    slopes: Vec<f64>,
}

/// k_b(τ, x) = x(4π)^{-1/2}τ^{-3/2}e^{-x²/4τ}.
pub fn boundary_kernel(tau: f64, x: f64) -> f64 {
    if tau <= 0.0 {
        return 0.0;
    }
    x / (4.0 * PI).sqrt() * tau.powf(-1.5) * (-x * x / (4.0 * tau)).exp()
}

/// ∫₀^τ k_b(σ, x) dσ.
fn f0(tau: f64, x: f64) -> f64 {
    if tau <= 0.0 {
        return 0.0;
    }
    libm::erfc(x / (2.0 * tau.sqrt()))
}

/// ∫₀^τ σ k_b(σ, x) dσ.
fn f1(tau: f64, x: f64) -> f64 {
    if tau <= 0.0 {
        return 0.0;
    }
    let z = x / (2.0 * tau.sqrt());
    x * ((tau / PI).sqrt() * (-z * z).exp() - 0.5 * x * libm::erfc(z))
}

/// ∂ₓ² of f1, from ∂ₓ²k_b = ∂_τ k_b.
fn f1_xx(tau: f64, x: f64) -> f64 {
    tau * boundary_kernel(tau, x) - f0(tau, x)
}

/// Cells shorter than this fraction of their distance σ from t are integrated by
/// Gauss–Legendre; differencing the closed forms there cancels catastrophically.
const SHORT_CELL: f64 = 0.02;

/// Closed-form quantities at one end σ of a cell. `e` holds erf(z) for z < 1 and erfc(z)
/// otherwise, z = x/(2√σ), so differences of f0 never subtract two numbers near 1.
#[derive(Clone, Copy)]
struct End {
    z: f64,
    e: f64,
    b: f64,
    k: f64,
    bxx: f64,
}

impl End {
    fn at(sigma: f64, x: f64) -> Self {
        if sigma <= 0.0 {
            return Self { z: f64::INFINITY, e: 0.0, b: 0.0, k: 0.0, bxx: 0.0 };
        }
        let z = x / (2.0 * sigma.sqrt());
        let e = if z < 1.0 { libm::erf(z) } else { libm::erfc(z) };
        Self { z, e, b: f1(sigma, x), k: boundary_kernel(sigma, x), bxx: f1_xx(sigma, x) }
    }

    fn erfc(&self) -> f64 {
        if self.z < 1.0 {
            1.0 - self.e
        } else {
            self.e
        }
    }
}

/// f0(σ_hi) − f0(σ_lo) with σ_hi > σ_lo.
fn f0_diff(hi: &End, lo: &End) -> f64 {
    match (hi.z < 1.0, lo.z < 1.0) {
        (true, true) => lo.e - hi.e,
        (false, false) => hi.e - lo.e,
        _ => hi.erfc() - lo.erfc(),
    }
}

/// (u, ∂ₜu, ∂ₓ²u) at (t, x) for the piecewise-linear interpolant of the data. The two
/// derivatives come from separate cell formulas and agree only if both are right.
fn evaluate(k: &Knots, t: f64, x: f64) -> [f64; 3] {
    let (mut u, mut uxx) = (0.0, 0.0);
    let mut ut = k.v[0] * boundary_kernel(t, x);
    let mut hi_end: Option<End> = None;
    let mut last_hi = t;
    for c in 0..k.slopes.len() {
        if k.s[c] >= t {
            return [u, ut, uxx];
        }
        let hi = t - k.s[c];
        let lo = (t - k.s[c + 1]).max(0.0);
        last_hi = lo;
        let m = k.slopes[c];
        let level = k.v[c] + m * hi;
        if hi - lo < SHORT_CELL * lo {
            // g and the slope in terms of the cell's end values: m itself can be huge
            // on the first cells of a strongly graded time grid.
            let half = 0.5 * (k.s[c + 1] - k.s[c]);
            let jump = k.v[c + 1] - k.v[c];
            for q in 0..3 {
                let frac = 0.5 * (1.0 + GL3_X[q]);
                let s = hi - 2.0 * half * frac;
                let kb = boundary_kernel(s, x);
                let gs = k.v[c] + jump * frac;
                u += kb * half * GL3_W[q] * gs;
                ut += kb * 0.5 * GL3_W[q] * jump;
                uxx += kb * half * GL3_W[q] * (x * x / (4.0 * s * s) - 1.5 / s) * gs;
            }
            hi_end = None;
            continue;
        }
        let a = hi_end.unwrap_or_else(|| End::at(hi, x));
        let b = End::at(lo, x);
        let da = f0_diff(&a, &b);
        u += level * da - m * (a.b - b.b);
        uxx += level * (a.k - b.k) - m * (a.bxx - b.bxx);
        ut += m * da;
        hi_end = Some(b);
    }
    // Constant continuation past the last node.
    let last = *k.v.last().unwrap();
    [u + last * f0(last_hi, x), ut, uxx + last * boundary_kernel(last_hi, x)]
}

/// u(t, x) = ∫₀ᵗ k_b(t − s, x) g(s) ds for the interpolated data, evaluated exactly.
pub fn boundary_solution_at(g: &BoundaryData, t: f64, x: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if x <= 0.0 {
        return interpolate(&g.knots(), t);
    }
    evaluate(&g.knots(), t, x)[0]
}

fn interpolate(k: &Knots, t: f64) -> f64 {
    let c = k.s.partition_point(|&s| s <= t);
    if c >= k.s.len() {
        return *k.v.last().unwrap();
    }
    let c = c - 1;
    k.v[c] + k.slopes[c] * (t - k.s[c])
}

/// δ = 1 − (1 + γ)/(2p).
pub fn trace_smoothness(p: f64, gamma: f64) -> f64 {
    1.0 - (1.0 + gamma) / (2.0 * p)
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BoundaryOptions {
    /// Defaults to the number of time nodes.
    pub space_nodes: Option<usize>,
    /// Defaults to 12√T.
    pub x_max: Option<f64>,
    /// Defaults to max(2, g_t/2), which lines x² up with the time grading.
    pub space_grading: Option<f64>,
}

pub fn solve_heat_boundary(g: &BoundaryData, p: f64, gamma: f64) -> Result<(SpaceTimeFunction, NormReport)> {
    solve_heat_boundary_with(g, p, gamma, &BoundaryOptions::default())
}

/// u′ = ∂ₓ²u on the half-line with u(0) = 0 and u(t, 0) = g(t). The report value is
/// (‖∂ₜu‖ + ‖∂ₓ²u‖) / ([g]_{B^δ} + ‖g‖_{Lᵖ}) with the numerator in Lᵖ(0, T; Lᵖ(w_γ)).
pub fn solve_heat_boundary_with(
    g: &BoundaryData,
    p: f64,
    gamma: f64,
    opts: &BoundaryOptions,
) -> Result<(SpaceTimeFunction, NormReport)> {
    LebesgueExponent::new(p)?;
    check_gamma(p, gamma, &[p - 1.0, 2.0 * p - 3.0])?;
    if gamma < 2.0 * p - 3.0 && !g.compatibility {
        return Err(LabError::Compatibility(format!(
            "gamma = {gamma} < 2p - 3 = {} requires g(0) = 0, got g(0) = {}",
            2.0 * p - 3.0,
            g.initial
        )));
    }
    let tg = &g.time_grid;
    let sg = Arc::new(make_graded_grid(
        opts.space_nodes.unwrap_or(tg.n),
        opts.x_max.unwrap_or(12.0 * tg.x_max.sqrt()),
        opts.space_grading.unwrap_or((tg.grading_exponent / 2.0).max(2.0)),
    )?);
    let (nt, nx) = (tg.n, sg.n);
    let knots = g.knots();
    let rows: Vec<Vec<[f64; 3]>> = (0..nt)
        .into_par_iter()
        .map(|i| sg.nodes.iter().map(|&x| evaluate(&knots, tg.nodes[i], x)).collect())
        .collect();

    let w = PowerWeight::half_line(gamma);
    let slice_norm = |v: Vec<f64>| lp_norm(&GridFunction::from_real(&sg, &v), p, &w);
    let mut values = Vec::with_capacity(nt * nx);
    let (mut n_dt, mut n_dxx, mut n_fd) = (Vec::with_capacity(nt), Vec::with_capacity(nt), Vec::with_capacity(nt));
    for row in &rows {
        n_dt.push(slice_norm(row.iter().map(|r| r[1]).collect())?);
        n_dxx.push(slice_norm(row.iter().map(|r| r[2]).collect())?);
        let c: Vec<C64> = row.iter().map(|r| C64::new(r[0], 0.0)).collect();
        n_fd.push(lp_norm(&GridFunction::new(sg.clone(), fd_derivative(&sg, &c, 2)?, 1)?, p, &w)?);
        values.extend(row.iter().map(|r| r[0]));
    }
    let a = temporal_norm(tg, &n_dt, p, 0.0);
    let b = temporal_norm(tg, &n_dxx, p, 0.0);
    let b_fd = temporal_norm(tg, &n_fd, p, 0.0);
    let delta = trace_smoothness(p, gamma);
    let gf = g.as_grid_function();
    let besov = besov_time_seminorm(&gf, delta, p)?.value;
    let g_norm = lp_norm(&gf, p, &PowerWeight::new(0.0, Geometry::HalfLine)?)?;
    let den = besov + g_norm;
    let value = if den == 0.0 { 0.0 } else { (a + b) / den };
    let report = NormReport::new("max_reg_boundary", GridInfo::from(&*sg), value)
        .param("p", p)
        .param("gamma", gamma)
        .param("delta", delta)
        .param("dt_norm", a)
        .param("dxx_norm", b)
        .param("dxx_fd_norm", b_fd)
        .param("besov", besov)
        .param("g_norm", g_norm)
        .param("nt", nt as f64)
        .param("t_max", tg.x_max)
        .param("t_first", tg.nodes[0]);
    Ok((SpaceTimeFunction::new(tg.clone(), sg, values)?, report))
}

