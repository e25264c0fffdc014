//! Resolvents through the rotated Laplace transform
//! (μ - Δ)^{-1} f = e^{iδ} ∫₀^∞ e^{-μ s e^{iδ}} T(s e^{iδ}) f ds.

use num_complex::Complex64 as C64;

use super::semigroup::{check_half_line, ProductLayout};
use crate::error::{LabError, Result};
use crate::kernels::ComplexTime;
use crate::weighted_spaces::{GridFunction, PowerWeight};

/// Default node count of the log-spaced Laplace rule.
pub const DEFAULT_LAPLACE_NODES: usize = 200;
/// Lower end of the s-range is S_LOW / |a|; the part below it is integrated analytically.
const S_LOW: f64 = 1e-8;
/// Upper end is S_HIGH / Re(a), where the integrand has decayed by e^{-S_HIGH}.
const S_HIGH: f64 = 46.0;
const MAX_ROTATION: f64 = 1.45;

/// Samples of T(s_k e^{iδ}) f along one ray, reusable for every μ with μe^{iδ} in a fixed
/// range of the right half-plane.
pub struct RayCache {
    pub delta: f64,
    s: Vec<f64>,
    w: Vec<f64>,
    samples: Vec<Vec<C64>>,
    f: Vec<C64>,
    a_min_re: f64,
    a_max_abs: f64,
}

impl RayCache {
    /// `a_min_re` and `a_max_abs` bound Re(μe^{iδ}) and |μ| for the μ that will be queried.
    pub fn new(layout: &ProductLayout, f: &[C64], delta: f64, a_min_re: f64, a_max_abs: f64, nodes: usize) -> Result<Self> {
        if !(delta.abs() <= MAX_ROTATION) {
            return Err(LabError::Argument(format!("ray rotation {delta} too close to ±π/2")));
        }
        if !(a_min_re > 0.0) || a_max_abs < a_min_re || nodes < 8 {
            return Err(LabError::Argument("invalid Laplace range".into()));
        }
        let lo = (S_LOW / a_max_abs).ln();
        let hi = (S_HIGH / a_min_re).ln();
        let du = (hi - lo) / (nodes - 1) as f64;
        let mut s = Vec::with_capacity(nodes);
        let mut w = Vec::with_capacity(nodes);
        for k in 0..nodes {
            let sk = (lo + k as f64 * du).exp();
            let end = if k == 0 || k == nodes - 1 { 0.5 } else { 1.0 };
            s.push(sk);
            w.push(end * du * sk);
        }
        let samples = s
            .iter()
            .map(|&sk| ComplexTime::new(sk, delta).map(|z| layout.apply(f, z)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { delta, s, w, samples, f: f.to_vec(), a_min_re, a_max_abs })
    }

    /// (μ - Δ)^{-1} f.
    pub fn resolvent(&self, mu: C64) -> Result<Vec<C64>> {
        let rot = C64::from_polar(1.0, self.delta);
        let a = mu * rot;
        if a.re < self.a_min_re * (1.0 - 1e-9) || a.norm() > self.a_max_abs * (1.0 + 1e-9) {
            return Err(LabError::Argument(format!("μ = {mu} outside the range this ray was sampled for")));
        }
        let n = self.f.len();
        let mut out = vec![C64::new(0.0, 0.0); n];
        for (k, v) in self.samples.iter().enumerate() {
            let c = self.w[k] * (-a * self.s[k]).exp();
            for i in 0..n {
                out[i] += c * v[i];
            }
        }
        // ∫₀^{s₀} e^{-as} T(s)f ds ≈ f (1 - e^{-a s₀}) / a
        let s0 = self.s[0];
        let head = crate::kernels::one_minus_exp_neg(a * s0, 1.0) / a;
        for i in 0..n {
            out[i] = (out[i] + head * self.f[i]) * rot;
        }
        Ok(out)
    }

    /// Conjugate ray: valid for real f, gives the cache for rotation -δ.
    pub fn conjugate(&self) -> Self {
        Self {
            delta: -self.delta,
            s: self.s.clone(),
            w: self.w.clone(),
            samples: self.samples.iter().map(|v| v.iter().map(|c| c.conj()).collect()).collect(),
            f: self.f.iter().map(|c| c.conj()).collect(),
            a_min_re: self.a_min_re,
            a_max_abs: self.a_max_abs,
        }
    }
}

/// Rotation that puts μe^{iδ} on the positive real axis.
pub fn rotation_for(mu: C64) -> f64 {
    -mu.arg() / 2.0
}

/// (λ - Δ)^{-1} f for λ outside (-∞, 0].
pub fn apply_resolvent(f: &GridFunction, lambda: C64, w: &PowerWeight, laplace_nodes: usize) -> Result<GridFunction> {
    check_half_line(f, w)?;
    if !(lambda.re.is_finite() && lambda.im.is_finite()) || (lambda.im == 0.0 && lambda.re <= 0.0) {
        return Err(LabError::Spectrum(format!("λ = {lambda} lies in the spectrum (-∞, 0]")));
    }
    let delta = rotation_for(lambda);
    if delta.abs() > MAX_ROTATION {
        return Err(LabError::Argument(format!("λ = {lambda} too close to the negative axis for the Laplace route")));
    }
    let a = lambda * C64::from_polar(1.0, delta);
    let layout = ProductLayout::new(&f.grid);
    f.map_components(|c| RayCache::new(&layout, c, delta, a.re, a.norm(), laplace_nodes)?.resolvent(lambda))
}
