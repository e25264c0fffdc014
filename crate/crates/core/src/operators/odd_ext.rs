//! Odd reflection to the whole line and a spectral reference solver for (λ - Δ)u = f.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rustfft::FftPlanner;

use super::semigroup::check_half_line;
use crate::error::{LabError, Result};
use crate::weighted_spaces::{GridFunction, PowerWeight};

/// f extended by f(-x) = -f(x), on the mirrored nodes -x_n < ... < -x_1 < x_1 < ... < x_n.
#[derive(Clone, Debug)]
pub struct OddExtension {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub values: Vec<C64>,
}

pub fn odd_extension(f: &GridFunction) -> Result<OddExtension> {
    if f.value_dim != 1 {
        return Err(LabError::Argument("odd extension of scalar functions only".into()));
    }
    let g = &f.grid;
    let n = g.n;
    let mut nodes = Vec::with_capacity(2 * n);
    let mut weights = Vec::with_capacity(2 * n);
    let mut values = Vec::with_capacity(2 * n);
    for i in (0..n).rev() {
        nodes.push(-g.nodes[i]);
        weights.push(g.quad_weights[i]);
        values.push(-f.values[i]);
    }
    nodes.extend_from_slice(&g.nodes);
    weights.extend_from_slice(&g.quad_weights);
    values.extend_from_slice(&f.values);
    Ok(OddExtension { nodes, weights, values })
}

impl OddExtension {
    /// ‖E f‖_{L^p(|x|^γ)}.
    pub fn lp_norm(&self, p: f64, gamma: f64) -> f64 {
        let mut s = crate::quad::CompensatedSum::default();
        for i in 0..self.nodes.len() {
            s.add(self.weights[i] * self.nodes[i].abs().powf(gamma) * self.values[i].norm().powf(p));
        }
        s.value().powf(1.0 / p)
    }
}

/// Uniform points per period of the FFT solver.
pub const FFT_POINTS: usize = 1 << 16;
/// Required e-folds of the free-space Green function between the support of f and the
/// periodic image.
const WRAP_EFOLDS: f64 = 25.0;

/// Solves (λ - Δ)u = f on the half-line with u(0) = 0 by solving the odd extension on the
/// periodic cell [-X_max, X_max).
pub fn odd_extension_solve(f: &GridFunction, lambda: f64, w: &PowerWeight) -> Result<GridFunction> {
    check_half_line(f, w)?;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(LabError::Argument(format!("spectral solve needs λ > 0, got {lambda}")));
    }
    let g = f.grid.clone();
    let x_max = g.x_max;
    let fmax = f.values.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    let support = (0..g.n).rev().find(|&i| f.values[i].norm() > 1e-12 * fmax).map_or(0.0, |i| g.nodes[i]);
    let gap = x_max - support;
    if lambda.sqrt() * gap < WRAP_EFOLDS {
        return Err(LabError::Wraparound(format!(
            "support ends at {support:.3}, only {gap:.3} from X_max; need √λ·gap ≥ {WRAP_EFOLDS}"
        )));
    }
    let n = FFT_POINTS;
    let h = 2.0 * x_max / n as f64;
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let comps = (0..f.value_dim)
        .map(|c| {
            let fc = f.component(c);
            let mut buf: Vec<C64> = (0..n)
                .map(|m| {
                    let y = -x_max + m as f64 * h;
                    let ay = y.abs();
                    if ay == 0.0 || ay >= x_max {
                        return C64::new(0.0, 0.0);
                    }
                    let (s, l) = g.cubic_stencil(ay);
                    let v = fc[s] * l[0] + fc[s + 1] * l[1] + fc[s + 2] * l[2] + fc[s + 3] * l[3];
                    if y < 0.0 { -v } else { v }
                })
                .collect();
            fwd.process(&mut buf);
            for (k, b) in buf.iter_mut().enumerate() {
                let ks = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
                let xi = PI * ks / x_max;
                *b /= (lambda + xi * xi) * n as f64;
            }
            inv.process(&mut buf);
            // back to the graded nodes by 4-point Lagrange interpolation on the uniform grid
            g.nodes
                .iter()
                .map(|&x| {
                    let pos = (x + x_max) / h;
                    let m0 = (pos.floor() as usize).saturating_sub(1).min(n - 4);
                    let mut acc = C64::new(0.0, 0.0);
                    for j in 0..4 {
                        let mut l = 1.0;
                        for k in 0..4 {
                            if k != j {
                                l *= (pos - (m0 + k) as f64) / (j as f64 - k as f64);
                            }
                        }
                        acc += buf[m0 + j] * l;
                    }
                    acc
                })
                .collect()
        })
        .collect();
    Ok(GridFunction::from_components(&g, comps))
}
