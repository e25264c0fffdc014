//! φ(A) f for A = -Δ through (2πi)^{-1} ∫_Γ φ(λ) R(λ, A) f dλ, with Γ the boundary of the
//! sector |arg λ| < σ traversed from ∞e^{iσ} through 0 to ∞e^{-iσ}.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64 as C64;

use super::resolvent::{rotation_for, RayCache};
use super::semigroup::{check_half_line, ProductLayout};
use crate::error::{LabError, Result};
use crate::weighted_spaces::{GridFunction, PowerWeight};

pub const DEFAULT_CONTOUR_NODES: usize = 256;
pub const DEFAULT_R_MAX: f64 = 1e4;
pub const DEFAULT_CONTOUR_TOLERANCE: f64 = 1e-4;
pub const DEFAULT_RAY_LAPLACE_NODES: usize = 320;
/// Step of the scalar tail integral in log |λ|.
const TAIL_STEP: f64 = 0.02;
const TAIL_LOG_LIMIT: f64 = 700.0;

#[derive(Clone, Debug)]
pub struct SectorContour {
    pub sigma: f64,
    pub r_min: f64,
    pub r_max: f64,
    /// Radii of the nodes, shared by both rays.
    pub radii: Vec<f64>,
    /// Trapezoid weights in d|λ| (all positive).
    pub weights: Vec<f64>,
    pub tolerance: f64,
    pub laplace_nodes: usize,
}

impl SectorContour {
    pub fn new(sigma: f64, r_max: f64, n_nodes: usize) -> Result<Self> {
        if !(sigma > 0.0 && sigma < PI / 2.0) {
            return Err(LabError::Argument(format!("contour angle {sigma} must lie in (0, π/2)")));
        }
        if !(r_max > 1.0 && r_max.is_finite()) || n_nodes < 8 {
            return Err(LabError::Argument("contour needs R_max > 1 and at least 8 nodes".into()));
        }
        let r_min = 1.0 / r_max;
        let (lo, hi) = (r_min.ln(), r_max.ln());
        let du = (hi - lo) / (n_nodes - 1) as f64;
        let radii: Vec<f64> = (0..n_nodes).map(|j| (lo + j as f64 * du).exp()).collect();
        let weights = radii
            .iter()
            .enumerate()
            .map(|(j, r)| if j == 0 || j == n_nodes - 1 { 0.5 * du * r } else { du * r })
            .collect();
        Ok(Self {
            sigma,
            r_min,
            r_max,
            radii,
            weights,
            tolerance: DEFAULT_CONTOUR_TOLERANCE,
            laplace_nodes: DEFAULT_RAY_LAPLACE_NODES,
        })
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self
    }

    pub fn with_laplace_nodes(mut self, m: usize) -> Self {
        self.laplace_nodes = m;
        self
    }

    /// Nodes on the upper ray followed by their conjugates on the lower ray.
    pub fn nodes(&self) -> Vec<C64> {
        let up: Vec<C64> = self.radii.iter().map(|&r| C64::from_polar(r, self.sigma)).collect();
        up.iter().copied().chain(up.iter().map(|z| z.conj())).collect()
    }
}

impl Default for SectorContour {
    fn default() -> Self {
        Self::new(PI / 4.0, DEFAULT_R_MAX, DEFAULT_CONTOUR_NODES).expect("default contour")
    }
}

pub type SymbolFn = Arc<dyn Fn(C64) -> C64 + Send + Sync>;

#[derive(Clone)]
pub struct HolomorphicSymbol {
    pub name: String,
    pub evaluator: SymbolFn,
    pub sup_norm_hint: f64,
    /// |φ(λ)| ≲ min(|λ|^ε, |λ|^{-ε}) on the sector.
    pub decay_epsilon: f64,
}

impl std::fmt::Debug for HolomorphicSymbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HolomorphicSymbol")
            .field("name", &self.name)
            .field("sup_norm_hint", &self.sup_norm_hint)
            .field("decay_epsilon", &self.decay_epsilon)
            .finish()
    }
}

impl HolomorphicSymbol {
    pub fn new(name: &str, evaluator: SymbolFn, sup_norm_hint: f64, decay_epsilon: f64) -> Result<Self> {
        if !(decay_epsilon > 0.0) || !(sup_norm_hint > 0.0) {
            return Err(LabError::Argument("a symbol needs ε > 0 and a positive sup bound".into()));
        }
        Ok(Self { name: name.into(), evaluator, sup_norm_hint, decay_epsilon })
    }

    /// λ/(1+λ)², bounded by 1/(2 + 2cos σ) ≤ 1/2 on the sector.
    pub fn rational_example() -> Self {
        let f: SymbolFn = Arc::new(|l: C64| l / ((1.0 + l) * (1.0 + l)));
        Self::new("lambda/(1+lambda)^2", f, 0.5, 1.0).expect("valid symbol")
    }

    /// λ^{iτ} λ^ε/(1 + λ^{2ε}); |λ^{iτ}| ≤ e^{|τ|σ} on the sector and the second factor
    /// is at most 1/(2cos(εσ)).
    pub fn regularized_imaginary_power(tau: f64, eps: f64, sigma: f64) -> Result<Self> {
        let f: SymbolFn = Arc::new(move |l: C64| {
            let le = l.powf(eps);
            (C64::new(0.0, tau) * l.ln()).exp() * le / (1.0 + le * le)
        });
        let hint = (tau.abs() * sigma).exp() / (2.0 * (eps * sigma).cos());
        Self::new(&format!("lambda^(i{tau}) lambda^{eps}/(1+lambda^{})", 2.0 * eps), f, hint, eps)
    }

    pub fn eval(&self, l: C64) -> C64 {
        (self.evaluator)(l)
    }
}

#[derive(Clone, Debug, Default)]
pub struct ContourDiagnostics {
    /// Estimated error of the frozen-resolvent head below r_min.
    pub head_error: f64,
    /// Estimated error of the asymptotic tail beyond R_max.
    pub tail_error: f64,
    /// Coefficient c with tail ≈ c f.
    pub tail_coefficient: C64,
}

/// ∫_{ln R}^∞ φ(e^{u±iσ}) du and ∫_{ln R}^∞ φ(e^{u±iσ}) e^{-(u - ln R)} du on both rays, the
/// weights of f/λ and of the first correction in R(λ)f = f/λ + Af/λ² + ... beyond R_max.
fn tail_integrals(phi: &HolomorphicSymbol, c: &SectorContour) -> Result<[[C64; 2]; 2]> {
    let rays = [C64::from_polar(1.0, c.sigma), C64::from_polar(1.0, -c.sigma)];
    let u0 = c.r_max.ln();
    let mut acc = [[C64::new(0.0, 0.0); 2]; 2];
    let stop = 1e-14 * phi.sup_norm_hint.max(1.0);
    let mut u = u0;
    let mut first = true;
    loop {
        let r = u.exp();
        let vals = [phi.eval(rays[0] * r), phi.eval(rays[1] * r)];
        let wt = if first { 0.5 * TAIL_STEP } else { TAIL_STEP };
        first = false;
        let damp = (-(u - u0)).exp();
        for k in 0..2 {
            acc[k][0] += vals[k] * wt;
            acc[k][1] += vals[k] * (wt * damp);
        }
        let last = vals[0].norm().max(vals[1].norm());
        if last < stop {
            break;
        }
        u += TAIL_STEP;
        if u > TAIL_LOG_LIMIT {
            let eps = phi.decay_epsilon;
            let suggested = (c.r_max * (last / c.tolerance).max(1.0).powf(1.0 / eps)).min(f64::MAX);
            return Err(LabError::Contour {
                msg: format!("symbol {} has not decayed by |λ| = e^{TAIL_LOG_LIMIT} (|φ| = {last:.3e})", phi.name),
                suggested_r_max: suggested,
            });
        }
    }
    Ok(acc)
}

/// ∫₀^{r_min} φ(r e^{±iσ}) dr on both rays, the weight of R(r_min e^{±iσ}) f below r_min.
fn head_integrals(phi: &HolomorphicSymbol, c: &SectorContour) -> [C64; 2] {
    let rays = [C64::from_polar(1.0, c.sigma), C64::from_polar(1.0, -c.sigma)];
    let u0 = c.r_min.ln();
    let mut acc = [C64::new(0.0, 0.0); 2];
    let stop = 1e-16 * phi.sup_norm_hint.max(1.0) * c.r_min;
    let mut u = u0;
    let mut first = true;
    while u > u0 - TAIL_LOG_LIMIT {
        let r = u.exp();
        let vals = [phi.eval(rays[0] * r) * r, phi.eval(rays[1] * r) * r];
        let wt = if first { 0.5 * TAIL_STEP } else { TAIL_STEP };
        first = false;
        acc[0] += vals[0] * wt;
        acc[1] += vals[1] * wt;
        if vals[0].norm().max(vals[1].norm()) < stop {
            break;
        }
        u -= TAIL_STEP;
    }
    acc
}

fn sup_abs(v: &[C64]) -> f64 {
    v.iter().fold(0.0, |m, c| m.max(c.norm()))
}

pub fn apply_hinf_symbol(f: &GridFunction, phi: &HolomorphicSymbol, contour: &SectorContour, w: &PowerWeight) -> Result<GridFunction> {
    apply_hinf_symbol_detailed(f, phi, contour, w).map(|(g, _)| g)
}

pub fn apply_hinf_symbol_detailed(
    f: &GridFunction,
    phi: &HolomorphicSymbol,
    contour: &SectorContour,
    w: &PowerWeight,
) -> Result<(GridFunction, ContourDiagnostics)> {
    HinfEngine::new(f, contour, w)?.apply(phi)
}

struct Component {
    f: Vec<C64>,
    fnorm: f64,
    /// R(λ_j, A) f on the upper and the lower ray.
    up: Vec<Vec<C64>>,
    dn: Vec<Vec<C64>>,
}

/// Resolvents of one f at all contour nodes; any number of symbols can then be applied.
pub struct HinfEngine {
    grid: std::sync::Arc<crate::weighted_spaces::GradedGrid>,
    contour: SectorContour,
    comps: Vec<Component>,
}

impl HinfEngine {
    /// λR(λ)f - f ≈ Af/λ.
    fn first_order(r: &[C64], f: &[C64], l: C64) -> Vec<C64> {
        r.iter().zip(f).map(|(ri, fi)| l * ri - fi).collect()
    }

    pub fn new(f: &GridFunction, contour: &SectorContour, w: &PowerWeight) -> Result<Self> {
        check_half_line(f, w)?;
        let sigma = contour.sigma;
        let delta_up = rotation_for(-C64::from_polar(1.0, sigma));
        let a_min_re = contour.r_min * delta_up.cos();
        let layout = ProductLayout::new(&f.grid);
        let nodes = contour.nodes();
        let m = contour.radii.len();
        let mut comps = Vec::with_capacity(f.value_dim);
        for c in 0..f.value_dim {
            let fc = f.component(c);
            let real = fc.iter().all(|v| v.im == 0.0);
            let up = RayCache::new(&layout, &fc, delta_up, a_min_re, contour.r_max, contour.laplace_nodes)?;
            let dn = if real {
                up.conjugate()
            } else {
                RayCache::new(&layout, &fc, -delta_up, a_min_re, contour.r_max, contour.laplace_nodes)?
            };
            // R(λ, -Δ) = -(−λ − Δ)^{-1}
            let neg = |v: Vec<C64>| v.into_iter().map(|x| -x).collect::<Vec<_>>();
            let ru = (0..m).map(|j| up.resolvent(-nodes[j]).map(neg)).collect::<Result<Vec<_>>>()?;
            let rd = (0..m).map(|j| dn.resolvent(-nodes[m + j]).map(neg)).collect::<Result<Vec<_>>>()?;
            comps.push(Component { fnorm: sup_abs(&fc), f: fc, up: ru, dn: rd });
        }
        Ok(Self { grid: f.grid.clone(), contour: contour.clone(), comps })
    }

    pub fn apply(&self, phi: &HolomorphicSymbol) -> Result<(GridFunction, ContourDiagnostics)> {
        let contour = &self.contour;
        let nodes = contour.nodes();
        let phis: Vec<C64> = nodes.iter().map(|&l| phi.eval(l)).collect();
        if let Some(bad) = phis.iter().position(|v| !(v.norm() <= phi.sup_norm_hint * (1.0 + 1e-9))) {
            return Err(LabError::Argument(format!(
                "symbol {} exceeds its sup bound {} at λ = {}",
                phi.name, phi.sup_norm_hint, nodes[bad]
            )));
        }
        let tails = tail_integrals(phi, contour)?;
        let heads = head_integrals(phi, contour);
        let m = contour.radii.len();
        let (e_up, e_dn) = (C64::from_polar(1.0, contour.sigma), C64::from_polar(1.0, -contour.sigma));
        let eps = phi.decay_epsilon;
        let radii = &contour.radii;
        let scale = C64::new(0.0, 2.0 * PI).inv();
        let mut diag = ContourDiagnostics {
            tail_coefficient: (tails[1][0] - tails[0][0]) * scale,
            ..Default::default()
        };
        let mut out = Vec::with_capacity(self.comps.len());
        for comp in &self.comps {
            let mut acc = vec![C64::new(0.0, 0.0); comp.f.len()];
            for j in 0..m {
                let cu = -phis[j] * e_up * contour.weights[j];
                let cd = phis[m + j] * e_dn * contour.weights[j];
                let (ru, rd) = (&comp.up[j], &comp.dn[j]);
                for i in 0..acc.len() {
                    acc[i] += cu * ru[i] + cd * rd[i];
                }
            }
            if comp.fnorm > 0.0 {
                for (rays, off) in [(&comp.up, 0), (&comp.dn, m)] {
                    // below r_min R(r)f is frozen at its r_min value; the change over the first
                    // node interval measures what that misses
                    let d01: Vec<C64> = rays[0].iter().zip(&rays[1]).map(|(a, b)| a - b).collect();
                    let head = phis[off].norm() * radii[0] * sup_abs(&d01) / (PI * (1.0 + eps));
                    // beyond R_max: |φ| ~ r^{-ε}, ‖λR(λ)f - f‖ ~ r^{-β}
                    // beyond R_max the neglected term is (A²f)/λ³; its size at the second-to-last
                    // node is what the first-order model fails to capture there
                    let (lr, l2) = (nodes[off + m - 1], nodes[off + m - 2]);
                    let g = Self::first_order(&rays[m - 1], &comp.f, lr);
                    let miss: Vec<C64> = rays[m - 2]
                        .iter()
                        .zip(&comp.f)
                        .zip(&g)
                        .map(|((r, fi), gi)| l2 * r - fi - gi * (lr / l2))
                        .collect();
                    let ratio = radii[m - 2] / radii[m - 1];
                    let tl = phis[off + m - 1].norm() * sup_abs(&miss) * ratio * ratio / (PI * (eps + 2.0));
                    diag.head_error = diag.head_error.max(head / comp.fnorm);
                    diag.tail_error = diag.tail_error.max(tl / comp.fnorm);
                }
            }
            let g_up = Self::first_order(&comp.up[m - 1], &comp.f, nodes[m - 1]);
            let g_dn = Self::first_order(&comp.dn[m - 1], &comp.f, nodes[2 * m - 1]);
            out.push(
                (0..acc.len())
                    .map(|i| {
                        let t = (tails[1][0] - tails[0][0]) * comp.f[i] + tails[1][1] * g_dn[i] - tails[0][1] * g_up[i]
                            + heads[1] * e_dn * comp.dn[0][i]
                            - heads[0] * e_up * comp.up[0][i];
                        (acc[i] + t) * scale
                    })
                    .collect(),
            );
        }
        let est = diag.head_error + diag.tail_error;
        if est > contour.tolerance {
            let suggested = contour.r_max * (est / contour.tolerance).powf(1.0 / eps);
            return Err(LabError::Contour {
                msg: format!("contour truncation error estimate {est:.3e} above tolerance {:.1e}", contour.tolerance),
                suggested_r_max: suggested.min(f64::MAX),
            });
        }
        Ok((GridFunction::from_components(&self.grid, out), diag))
    }
}
