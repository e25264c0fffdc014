//! T(z) f(x) = ∫₀^∞ H_z(x, y) f(y) dy by product integration: f is replaced by its
//! piecewise-cubic interpolant and each piece is integrated with Gauss-Legendre points,
//! subdivided wherever the kernel is narrower than the piece.

use std::sync::Arc;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{arg_err, Result};
use crate::kernels::{ComplexTime, HalfLineKernel};
use crate::quad::{GL3_W, GL3_X};
use crate::weighted_spaces::{Geometry, GradedGrid, GridFunction, PowerWeight};

/// Largest kernel variation (in units of √(4t)) allowed across one Gauss-Legendre cell.
const CELL_RESOLUTION: f64 = 1.5;
/// Kernel magnitude cut-off e^{-WINDOW_EXP}.
const WINDOW_EXP: f64 = 40.0;

fn lagrange4(xs: &[f64], y: f64) -> [f64; 4] {
    let mut w = [0.0; 4];
    for j in 0..4 {
        let mut l = 1.0;
        for m in 0..4 {
            if m != j {
                l *= (y - xs[m]) / (xs[j] - xs[m]);
            }
        }
        w[j] = l;
    }
    w
}

/// Pieces [0, x₁], [x₁, x₂], ..., [x_n, X_max] with their cubic stencils and default points.
#[derive(Clone, Debug)]
pub struct ProductLayout {
    pub grid: Arc<GradedGrid>,
    breaks: Vec<f64>,
    stencil: Vec<usize>,
    pts: Vec<f64>,
    wts: Vec<f64>,
    lag: Vec<[f64; 4]>,
}

impl ProductLayout {
    pub fn new(grid: &Arc<GradedGrid>) -> Self {
        let n = grid.n;
        let mut breaks = Vec::with_capacity(n + 2);
        breaks.push(0.0);
        breaks.extend_from_slice(&grid.nodes);
        breaks.push(grid.x_max);
        let mut stencil = Vec::with_capacity(n + 1);
        let mut pts = Vec::with_capacity(3 * (n + 1));
        let mut wts = Vec::with_capacity(3 * (n + 1));
        let mut lag = Vec::with_capacity(3 * (n + 1));
        for p in 0..=n {
            let (a, b) = (breaks[p], breaks[p + 1]);
            let start = p.saturating_sub(2).min(n - 4);
            stencil.push(start);
            let xs = &grid.nodes[start..start + 4];
            let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
            for q in 0..3 {
                let y = c + h * GL3_X[q];
                pts.push(y);
                wts.push(h * GL3_W[q]);
                lag.push(lagrange4(xs, y));
            }
        }
        Self { grid: grid.clone(), breaks, stencil, pts, wts, lag }
    }

    /// Values of the interpolant at the default points.
    fn interpolate(&self, f: &[C64]) -> Vec<C64> {
        (0..self.pts.len())
            .map(|q| {
                let s = self.stencil[q / 3];
                let l = &self.lag[q];
                f[s] * l[0] + f[s + 1] * l[1] + f[s + 2] * l[2] + f[s + 3] * l[3]
            })
            .collect()
    }

    /// Visit (y, weight·H(x,y), piece) for every quadrature point used by row x.
    fn visit_row(&self, x: f64, k: &HalfLineKernel, mut visit: impl FnMut(Visit)) {
        let z = k.z;
        let ell = (4.0 * z.t).sqrt();
        let cosd = z.delta.cos();
        let smax = (WINDOW_EXP / cosd).sqrt();
        let win = ell * smax;
        let lo = (x - win).max(0.0);
        let hi = (x + win).min(self.grid.x_max);
        let npieces = self.stencil.len();
        let p_lo = self.breaks.partition_point(|&b| b <= lo).saturating_sub(1).min(npieces - 1);
        for p in p_lo..npieces {
            let (pa, pb) = (self.breaks[p], self.breaks[p + 1]);
            if pa >= hi {
                break;
            }
            let a = pa.max(lo);
            let b = pb.min(hi);
            if b <= a {
                continue;
            }
            let s_far = ((a - x).abs().max((b - x).abs()) / ell).min(smax);
            // the factor 1 - e^{-xy/z} only varies where x·y·cosδ/t is moderate
            let s_x = if x * a * cosd / z.t > WINDOW_EXP { 0.0 } else { x / ell };
            let rate = 1.0 + 2.0 * s_far + 2.0 * s_x;
            let m = ((b - a) / ell * rate / CELL_RESOLUTION).ceil().max(1.0) as usize;
            if m == 1 && a == pa && b == pb {
                for q in 3 * p..3 * p + 3 {
                    let y = self.pts[q];
                    visit(Visit { y, kw: k.eval(x, y) * self.wts[q], piece: p, point: Some(q) });
                }
            } else {
                let h = (b - a) / m as f64;
                for c in 0..m {
                    let mid = a + (c as f64 + 0.5) * h;
                    for q in 0..3 {
                        let y = mid + 0.5 * h * GL3_X[q];
                        visit(Visit { y, kw: k.eval(x, y) * (0.5 * h * GL3_W[q]), piece: p, point: None });
                    }
                }
            }
        }
    }

    fn lag_at(&self, piece: usize, y: f64) -> (usize, [f64; 4]) {
        let s = self.stencil[piece];
        (s, lagrange4(&self.grid.nodes[s..s + 4], y))
    }

    /// T(z) applied to one scalar component.
    pub fn apply(&self, f: &[C64], z: ComplexTime) -> Vec<C64> {
        let k = HalfLineKernel::new(z);
        let fq = self.interpolate(f);
        self.grid
            .nodes
            .par_iter()
            .map(|&x| {
                let mut acc = C64::new(0.0, 0.0);
                self.visit_row(x, &k, |v| {
                    let fy = match v.point {
                        Some(q) => fq[q],
                        None => {
                            let (s, l) = self.lag_at(v.piece, v.y);
                            f[s] * l[0] + f[s + 1] * l[1] + f[s + 2] * l[2] + f[s + 3] * l[3]
                        }
                    };
                    acc += v.kw * fy;
                });
                acc
            })
            .collect()
    }

    /// Dense n × n matrix of T(z) (row-major).
    pub fn matrix(&self, z: ComplexTime) -> Vec<C64> {
        let k = HalfLineKernel::new(z);
        let n = self.grid.n;
        let rows: Vec<Vec<C64>> = self
            .grid
            .nodes
            .par_iter()
            .map(|&x| {
                let mut row = vec![C64::new(0.0, 0.0); n];
                self.visit_row(x, &k, |v| {
                    let (s, l) = match v.point {
                        Some(q) => (self.stencil[v.piece], self.lag[q]),
                        None => self.lag_at(v.piece, v.y),
                    };
                    for j in 0..4 {
                        row[s + j] += v.kw * l[j];
                    }
                });
                row
            })
            .collect();
        rows.concat()
    }
}

struct Visit {
    y: f64,
    kw: C64,
    piece: usize,
    point: Option<usize>,
}

pub(crate) fn check_half_line(f: &GridFunction, w: &PowerWeight) -> Result<()> {
    if f.grid.geometry != Geometry::HalfLine {
        return arg_err("the half-line semigroup needs a half-line grid");
    }
    if w.geometry != f.grid.geometry {
        return arg_err("weight geometry does not match the grid");
    }
    if !f.is_finite() {
        return Err(crate::LabError::Data("input contains NaN or infinite values".into()));
    }
    Ok(())
}

/// T(z)f on the grid of f; the weight only fixes the space the result is measured in.
pub fn apply_semigroup(f: &GridFunction, z: ComplexTime, w: &PowerWeight) -> Result<GridFunction> {
    check_half_line(f, w)?;
    let layout = ProductLayout::new(&f.grid);
    f.map_components(|c| Ok(layout.apply(c, z)))
}
