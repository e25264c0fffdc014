use num_complex::Complex64 as C64;

use super::{check_gamma, SpaceTimeFunction};
use crate::error::{arg_err, LabError, Result};
use crate::kernels::ComplexTime;
use crate::operators::ProductLayout;
use crate::quad::CompensatedSum;
use crate::report::{GridInfo, NormReport};
use crate::weighted_spaces::{fd_derivative, lp_norm, Geometry, GradedGrid, GridFunction, LebesgueExponent, PowerWeight};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeatOptions {
    /// Accepted value of the time-step indicator Σ (hᵢ/2)‖f(tᵢ₊₁) − f(tᵢ)‖_∞ / Σ hᵢ‖f(tᵢ)‖_∞.
    pub time_tolerance: f64,
}

impl Default for HeatOptions {
    fn default() -> Self {
        Self { time_tolerance: 0.05 }
    }
}

/// (Σᵢ qᵢ tᵢ^μ aᵢ^q)^{1/q} over the time grid.
pub fn temporal_norm(time_grid: &GradedGrid, slice_norms: &[f64], q: f64, mu: f64) -> f64 {
    let mut s = CompensatedSum::new();
    for (i, a) in slice_norms.iter().enumerate() {
        s.add(time_grid.quad_weights[i] * time_grid.nodes[i].powf(mu) * a.powf(q));
    }
    s.value().powf(1.0 / q)
}

pub fn solve_heat_forced(
    f: &SpaceTimeFunction,
    lambda: f64,
    p: f64,
    q: f64,
    gamma: f64,
    mu: f64,
) -> Result<(SpaceTimeFunction, NormReport)> {
    solve_heat_forced_with(f, lambda, p, q, gamma, mu, &HeatOptions::default())
}

/// u′ + (λ − Δ)u = f, u(0) = 0, by trapezoidal Duhamel steps
/// uᵢ₊₁ = e^{−λh}T(h)(uᵢ + h fᵢ/2) + h fᵢ₊₁/2 with f(0) taken as f(t₁).
/// The report value is (‖u′‖ + ‖∂ₓ²u‖) / ‖f‖ in L^q(t^μ; Lᵖ(w_γ)).
pub fn solve_heat_forced_with(
    f: &SpaceTimeFunction,
    lambda: f64,
    p: f64,
    q: f64,
    gamma: f64,
    mu: f64,
    opts: &HeatOptions,
) -> Result<(SpaceTimeFunction, NormReport)> {
    LebesgueExponent::new(p)?;
    LebesgueExponent::new(q)?;
    if !(lambda > 0.0) {
        return Err(LabError::Solvability(format!("λ = {lambda}: the half-line problem needs λ > 0")));
    }
    check_gamma(p, gamma, &[p - 1.0])?;
    if !(mu > -1.0 && mu < q - 1.0) {
        return Err(LabError::Range(format!("temporal weight exponent mu = {mu} outside (-1, {})", q - 1.0)));
    }
    if f.space_grid.geometry != Geometry::HalfLine {
        return arg_err("the forced heat solver works on a half-line grid");
    }
    let (tg, sg) = (&f.time_grid, &f.space_grid);
    let (nt, nx) = (tg.n, sg.n);

    let sup: Vec<f64> = (0..nt).map(|i| f.slice(i).iter().fold(0.0f64, |m, v| m.max(v.abs()))).collect();
    let mut steps = vec![tg.nodes[0]];
    steps.extend(tg.nodes.windows(2).map(|w| w[1] - w[0]));
    let scale: f64 = steps.iter().zip(&sup).map(|(h, s)| h * s).sum();
    if scale > 0.0 {
        let mut jump = 0.0;
        for i in 1..nt {
            let d = f.slice(i).iter().zip(f.slice(i - 1)).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            jump += 0.5 * steps[i] * d;
        }
        let indicator = jump / scale;
        if indicator > opts.time_tolerance {
            return Err(LabError::Refinement(format!(
                "time-step indicator {indicator:.3e} exceeds tolerance {:.3e}; refine the time grid",
                opts.time_tolerance
            )));
        }
    }

    let layout = ProductLayout::new(sg);
    let mut values = Vec::with_capacity(nt * nx);
    let mut u = vec![C64::new(0.0, 0.0); nx];
    let mut prev_f: Vec<f64> = f.slice(0).to_vec();
    for i in 0..nt {
        let h = steps[i];
        let damp = (-lambda * h).exp();
        let cur = f.slice(i);
        let arg: Vec<C64> = u.iter().zip(&prev_f).map(|(a, b)| a + 0.5 * h * b).collect();
        let evolved = layout.apply(&arg, ComplexTime::real(h)?);
        for j in 0..nx {
            u[j] = damp * evolved[j] + 0.5 * h * cur[j];
        }
        values.extend(u.iter().map(|v| v.re));
        prev_f = cur.to_vec();
    }
    let sol = SpaceTimeFunction::new(tg.clone(), sg.clone(), values)?;
    let report = max_reg_report(f, &sol, lambda, p, q, gamma, mu)?;
    Ok((sol, report))
}

fn max_reg_report(
    f: &SpaceTimeFunction,
    u: &SpaceTimeFunction,
    lambda: f64,
    p: f64,
    q: f64,
    gamma: f64,
    mu: f64,
) -> Result<NormReport> {
    let (tg, sg) = (&u.time_grid, &u.space_grid);
    let (nt, nx) = (tg.n, sg.n);
    let w = PowerWeight::half_line(gamma);
    let mut dt = vec![0.0; nt * nx];
    for j in 0..nx {
        let col: Vec<C64> = (0..nt).map(|i| C64::new(u.at(i, j), 0.0)).collect();
        for (i, v) in fd_derivative(tg, &col, 1)?.into_iter().enumerate() {
            dt[i * nx + j] = v.re;
        }
    }
    let slice_norm = |v: &[f64]| lp_norm(&GridFunction::from_real(sg, v), p, &w);
    let mut n_dt = Vec::with_capacity(nt);
    let mut n_dxx = Vec::with_capacity(nt);
    let mut n_f = Vec::with_capacity(nt);
    for i in 0..nt {
        n_dt.push(slice_norm(&dt[i * nx..(i + 1) * nx])?);
        let c: Vec<C64> = u.slice(i).iter().map(|&v| C64::new(v, 0.0)).collect();
        let dxx: Vec<f64> = fd_derivative(sg, &c, 2)?.iter().map(|v| v.re).collect();
        n_dxx.push(slice_norm(&dxx)?);
        n_f.push(slice_norm(f.slice(i))?);
    }
    let a = temporal_norm(tg, &n_dt, q, mu);
    let b = temporal_norm(tg, &n_dxx, q, mu);
    let d = temporal_norm(tg, &n_f, q, mu);
    let value = if d == 0.0 { 0.0 } else { (a + b) / d };
    Ok(NormReport::new("max_reg_forced", GridInfo::from(&**sg), value)
        .param("p", p)
        .param("q", q)
        .param("gamma", gamma)
        .param("mu", mu)
        .param("lambda", lambda)
        .param("dt_norm", a)
        .param("dxx_norm", b)
        .param("f_norm", d)
        .param("nt", nt as f64)
        .param("t_max", tg.x_max))
}
