//! Closed-form heat kernels: the whole-space Gaussian, the reflected Dirichlet kernel of the
//! half-space, the sine expansion on (0, 1) and the Gaussian domination check.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{arg_err, LabError, Result};
use crate::report::{GridInfo, NormReport, Outcome};

/// z = t e^{iδ} with |δ| < π/2.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexTime {
    pub t: f64,
    pub delta: f64,
}

impl ComplexTime {
    pub fn new(t: f64, delta: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return arg_err(format!("|z| must be positive, got {t}"));
        }
        if !(delta.abs() < PI / 2.0) {
            return arg_err(format!("arg z must lie in (-pi/2, pi/2), got {delta}"));
        }
        Ok(Self { t, delta })
    }

    pub fn real(t: f64) -> Result<Self> {
        Self::new(t, 0.0)
    }

    pub fn z(&self) -> C64 {
        C64::from_polar(self.t, self.delta)
    }

    pub fn is_real(&self) -> bool {
        self.delta == 0.0
    }
}

/// Above this value of |x₁y₁/z| the reflected term is negligible and the plain difference is used.
pub const FACTORED_LIMIT: f64 = 30.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelEvalConfig {
    /// |w| below which 1 - e^{-w} goes through the expm1 split instead of 1 - exp(-w).
    pub stable_threshold: f64,
    pub d: usize,
}

impl Default for KernelEvalConfig {
    fn default() -> Self {
        Self { stable_threshold: 1.0, d: 1 }
    }
}

impl KernelEvalConfig {
    pub fn new(stable_threshold: f64, d: usize) -> Result<Self> {
        if !(stable_threshold > 0.0 && stable_threshold <= 1.0) {
            return arg_err("stable_threshold must lie in (0, 1]");
        }
        if d != 1 && d != 2 {
            return arg_err(format!("dimension must be 1 or 2, got {d}"));
        }
        Ok(Self { stable_threshold, d })
    }
}

/// 1 - e^{-w} without cancellation for small |w|.
#[inline]
pub fn one_minus_exp_neg(w: C64, threshold: f64) -> C64 {
    if w.norm() >= threshold {
        return C64::new(1.0, 0.0) - (-w).exp();
    }
    // e^{-w} - 1 = e^a cos b - 1 + i e^a sin b with -w = a + ib
    let (a, b) = (-w.re, -w.im);
    let ea = a.exp();
    let s = (0.5 * b).sin();
    let re = a.exp_m1() * b.cos() - 2.0 * s * s;
    -C64::new(re, ea * b.sin())
}

/// G_z(x) = (4πz)^{-d/2} e^{-|x|²/(4z)}, evaluated through its logarithm.
pub fn gauss_kernel(z: ComplexTime, x: &[f64]) -> C64 {
    let d = x.len() as f64;
    let zz = z.z();
    let r2: f64 = x.iter().map(|v| v * v).sum();
    let log = -0.5 * d * (4.0 * PI * zz).ln() - r2 / (4.0 * zz);
    log.exp()
}

/// Per-z constants of the Dirichlet kernel on the half-line (tangential factor separate).
#[derive(Clone, Copy, Debug)]
pub struct HalfLineKernel {
    pub z: ComplexTime,
    zz: C64,
    inv4z: C64,
    invz: C64,
    log_pref: C64,
    real: bool,
    t: f64,
    threshold: f64,
}

impl HalfLineKernel {
    pub fn new(z: ComplexTime) -> Self {
        Self::with_config(z, &KernelEvalConfig::default())
    }

    pub fn with_config(z: ComplexTime, cfg: &KernelEvalConfig) -> Self {
        let zz = z.z();
        Self {
            z,
            zz,
            inv4z: 1.0 / (4.0 * zz),
            invz: 1.0 / zz,
            log_pref: -0.5 * (4.0 * PI * zz).ln(),
            real: z.is_real(),
            t: z.t,
            threshold: cfg.stable_threshold,
        }
    }

    /// 1-d kernel H_z(x, y) for x, y ≥ 0.
    #[inline]
    pub fn eval(&self, x: f64, y: f64) -> C64 {
        if self.real {
            return C64::new(self.eval_real(x, y), 0.0);
        }
        let dm = x - y;
        let xy = x * y;
        let w = xy * self.invz;
        if w.norm() < FACTORED_LIMIT {
            (self.log_pref - dm * dm * self.inv4z).exp() * one_minus_exp_neg(w, self.threshold)
        } else {
            let dp = x + y;
            (self.log_pref - dm * dm * self.inv4z).exp() - (self.log_pref - dp * dp * self.inv4z).exp()
        }
    }

    #[inline]
    pub fn eval_real(&self, x: f64, y: f64) -> f64 {
        let t = self.t;
        let dm = x - y;
        let pref = (4.0 * PI * t).sqrt().recip();
        let w = x * y / t;
        if w < FACTORED_LIMIT {
            pref * (-dm * dm / (4.0 * t)).exp() * -(-w).exp_m1()
        } else {
            let dp = x + y;
            pref * ((-dm * dm / (4.0 * t)).exp() - (-dp * dp / (4.0 * t)).exp())
        }
    }

    /// Tangential Gaussian factor in d = 2 (offset x̃ - ỹ).
    pub fn tangential(&self, offset: f64) -> C64 {
        (self.log_pref - offset * offset * self.inv4z).exp()
    }

    pub fn z_value(&self) -> C64 {
        self.zz
    }
}

/// H_z(x, y) = G_z(x₁ - y₁, x̃ - ỹ) - G_z(x₁ + y₁, x̃ - ỹ) through the factored form.
pub fn dirichlet_kernel(z: ComplexTime, x1: f64, y1: f64, x_tangential_offset: &[f64]) -> Result<C64> {
    if x1 < 0.0 || y1 < 0.0 || !x1.is_finite() || !y1.is_finite() {
        return arg_err(format!("normal coordinates must be nonnegative, got ({x1}, {y1})"));
    }
    if x_tangential_offset.len() > 1 {
        return arg_err("only d = 1 or d = 2 is supported");
    }
    if x1 == 0.0 || y1 == 0.0 {
        return Ok(C64::new(0.0, 0.0));
    }
    let k = HalfLineKernel::new(z);
    let mut v = k.eval(x1, y1);
    if let Some(&o) = x_tangential_offset.first() {
        v *= k.tangential(o);
    }
    Ok(v)
}

/// λ_k = (kπ)², e_k(x) = √2 sin(kπx), k = 1..n_modes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalSpectrum {
    pub n_modes: usize,
}

impl IntervalSpectrum {
    pub fn new(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return arg_err("need at least one mode");
        }
        Ok(Self { n_modes })
    }

    pub fn eigenvalue(&self, k: usize) -> f64 {
        (k as f64 * PI).powi(2)
    }

    pub fn eigenfunction(&self, k: usize, x: f64) -> f64 {
        std::f64::consts::SQRT_2 * (k as f64 * PI * x).sin()
    }

    /// Smallest mode count with e^{-λ_N t} < tol.
    pub fn modes_needed(t: f64, tol: f64) -> usize {
        ((-tol.ln() / t).sqrt() / PI).floor() as usize + 1
    }

    /// Bound on Σ_{k > N} 2 e^{-k²π²t}.
    pub fn truncation_bound(&self, t: f64) -> f64 {
        let n = self.n_modes as f64;
        2.0 * (-(n + 1.0).powi(2) * PI * PI * t).exp() / (1.0 - (-(2.0 * n + 3.0) * PI * PI * t).exp())
    }
}

pub const MODE_TOLERANCE: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntervalKernelValue {
    pub value: f64,
    pub truncation_bound: f64,
}

/// Σ_k 2 sin(kπx) sin(kπy) e^{-k²π²t}.
pub fn interval_kernel(t: f64, x: f64, y: f64, spectrum: &IntervalSpectrum) -> Result<IntervalKernelValue> {
    if !(t > 0.0) {
        return arg_err(format!("t must be positive, got {t}"));
    }
    if !(0.0..=1.0).contains(&x) || !(0.0..=1.0).contains(&y) {
        return arg_err(format!("points must lie in [0, 1], got ({x}, {y})"));
    }
    if (-spectrum.eigenvalue(spectrum.n_modes) * t).exp() >= MODE_TOLERANCE {
        return Err(LabError::IncreaseModes { t, needed: IntervalSpectrum::modes_needed(t, MODE_TOLERANCE) });
    }
    let bound = spectrum.truncation_bound(t);
    if x == 0.0 || x == 1.0 || y == 0.0 || y == 1.0 {
        return Ok(IntervalKernelValue { value: 0.0, truncation_bound: bound });
    }
    Ok(IntervalKernelValue { value: interval_kernel_sum(t, x, y, spectrum.n_modes), truncation_bound: bound })
}

pub(crate) fn interval_kernel_sum(t: f64, x: f64, y: f64, n_modes: usize) -> f64 {
    let mut s = 0.0;
    for k in 1..=n_modes {
        let kp = k as f64 * PI;
        s += 2.0 * (kp * x).sin() * (kp * y).sin() * (-kp * kp * t).exp();
    }
    s
}

/// μ(B(x, r)) for dμ = x₁ dx on the half-plane.
pub fn mu_ball(x1: f64, r: f64) -> f64 {
    if x1 >= r {
        return x1 * PI * r * r;
    }
    // ∫_{-x₁}^{r} (x₁ + u) 2√(r² - u²) du
    let root = |u: f64| (r * r - u * u).max(0.0).sqrt();
    let area = |u: f64| u * root(u) + r * r * (u / r).clamp(-1.0, 1.0).asin();
    let moment = |u: f64| -2.0 / 3.0 * (r * r - u * u).max(0.0).powf(1.5);
    x1 * (area(r) - area(-x1)) + (moment(r) - moment(-x1))
}

/// Exponent θ of the worked case of the kernel condition.
pub const DOMINATION_THETA: f64 = 0.5;

/// Constant C_θ for θ = 1/2 assembled from the explicit case analysis at t = 1/4:
/// max{4, 8e^{1/4}, B₁, B₂}.
pub fn domination_constant() -> f64 {
    let phi = |y: f64| 0.5 * y + (0.25 * y * y + 1.0).sqrt();
    let mut b1: f64 = 0.0;
    let mut b2: f64 = 0.0;
    for i in 0..=20000 {
        // y from 1/10 up to 1e3 (log spaced)
        let y = 0.1 * 10f64.powf(4.0 * i as f64 / 20000.0);
        let x = phi(y);
        b1 = b1.max(x / y * (-0.5 * (x - y).powi(2)).exp());
        // y from 1e-6 up to 1/10
        let y = 0.1 * 10f64.powf(-5.0 * i as f64 / 20000.0);
        let x = 0.25 / y;
        b2 = b2.max(x / y * (-0.5 * (x - y).powi(2)).exp());
    }
    4.0f64.max(8.0 * 0.25f64.exp()).max(b1).max(b2)
}

/// Sample pair in ℝ²₊ × ℝ²₊: (normal, tangential) coordinates of x and y.
pub type SamplePair = ([f64; 2], [f64; 2]);

/// Log-spaced m × m lattice of normal coordinates in [lo, hi], zero tangential offset.
pub fn domination_lattice(m: usize, lo: f64, hi: f64) -> Vec<SamplePair> {
    let pts: Vec<f64> = (0..m).map(|i| lo * (hi / lo).powf(i as f64 / (m - 1) as f64)).collect();
    let mut out = Vec::with_capacity(m * m);
    for &x in &pts {
        for &y in &pts {
            out.push(([x, 0.0], [y, 0.0]));
        }
    }
    out
}

/// sup of H_t(x,y) μ(B(x,√t)) / (y₁ e^{-(1-θ)|x-y|²/(4t)}), plus a pointwise test of the
/// reduced θ = 1/2 inequality (1 - e^{-4x₁y₁})/y₁ ≤ C e^{|x₁-y₁|²/2} / max{x₁, 1} after
/// rescaling each pair to t = 1/4.
pub fn gaussian_domination_check(t: f64, sample_pairs: &[SamplePair]) -> NormReport {
    let c = domination_constant();
    let kern = ComplexTime::real(t).map(HalfLineKernel::new);
    let mut sup: f64 = 0.0;
    let mut violations = 0usize;
    let mut evaluated = 0usize;
    let decay = (1.0 - DOMINATION_THETA) / 4.0;
    if let Ok(k) = kern {
        for (x, y) in sample_pairs {
            if x[0] <= 0.0 || y[0] <= 0.0 {
                continue;
            }
            evaluated += 1;
            let off = x[1] - y[1];
            let h = k.eval_real(x[0], y[0]) * k.tangential(off).re;
            let d2 = (x[0] - y[0]).powi(2) + off * off;
            // H e^{+decay d²/t}, combined in log space
            let log_ratio = h.ln() + decay * d2 / t + mu_ball(x[0], t.sqrt()).ln() - y[0].ln();
            let r = if h > 0.0 { log_ratio.exp() } else { 0.0 };
            sup = sup.max(r);
            // reduced inequality at t = 1/4
            let s = 0.5 / t.sqrt();
            let (a, b) = (x[0] * s, y[0] * s);
            let lhs = -(-4.0 * a * b).exp_m1() / b;
            let rhs_log = c.ln() + 0.5 * (a - b).powi(2) - a.max(1.0).ln();
            if lhs.ln() > rhs_log + 1e-12 {
                violations += 1;
            }
        }
    }
    // μ(B(x,1/2)) ≤ (x₁ + 1/2)π/4 turns the reduced inequality into R ≤ 3C/8
    let bound = 3.0 * c / 8.0;
    let mut rep = NormReport::new("gaussian_domination", GridInfo { n: evaluated, x_max: 0.0, grading: 0.0 }, sup)
        .param("t", t)
        .param("theta", DOMINATION_THETA)
        .param("violations", violations as f64)
        .param("c_theta", c);
    rep.bound = Some(bound);
    rep.pass = Outcome::from_bool(kern.is_ok() && sup.is_finite() && violations == 0 && sup <= bound);
    rep
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RayDomination {
    pub pairs: usize,
    /// Pairs violating |H_z| ≤ cos(δ)^{-3/2} H_{t/cos δ}, the bound the pointwise chain
    /// e^{-|x-y|² cos δ/4t} |1 - e^{-xy e^{-iδ}/t}| ≤ e^{-|x-y|² cos δ/4t} ∫_0^{xy/t} e^{-s cos δ} ds gives.
    pub violations: usize,
    pub worst_ratio: f64,
    /// Pairs violating the shorter form |H_z| ≤ cos(δ)^{-1} H_{t cos δ}.
    pub short_form_violations: usize,
    pub short_form_worst_ratio: f64,
}

/// Pointwise comparison of |H_z(x, y)| for z = t e^{iδ} against real-time kernels on all
/// pairs of `points`. Pairs where both sides underflow are skipped.
pub fn complex_ray_domination(z: ComplexTime, points: &[f64]) -> RayDomination {
    let c = z.delta.cos();
    let lhs_k = HalfLineKernel::new(z);
    let wide = HalfLineKernel::new(ComplexTime { t: z.t / c, delta: 0.0 });
    let short = HalfLineKernel::new(ComplexTime { t: z.t * c, delta: 0.0 });
    let mut out = RayDomination { pairs: 0, violations: 0, worst_ratio: 0.0, short_form_violations: 0, short_form_worst_ratio: 0.0 };
    for &x in points {
        for &y in points {
            let lhs = lhs_k.eval(x, y).norm();
            if lhs < 1e-280 {
                continue;
            }
            out.pairs += 1;
            let a = c.powf(-1.5) * wide.eval_real(x, y);
            let b = short.eval_real(x, y) / c;
            let (ra, rb) = (lhs / a, lhs / b);
            out.worst_ratio = out.worst_ratio.max(ra);
            out.short_form_worst_ratio = out.short_form_worst_ratio.max(rb);
            out.violations += usize::from(ra > 1.0 + 1e-10);
            out.short_form_violations += usize::from(!(rb <= 1.0 + 1e-10));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_at_origin() {
        let v = gauss_kernel(ComplexTime::real(0.25).unwrap(), &[0.0]);
        assert!((v.re - PI.sqrt().recip()).abs() < 1e-15 && v.im == 0.0);
        let v = gauss_kernel(ComplexTime::new(0.25, PI / 4.0).unwrap(), &[0.0]);
        assert!((v.norm() - PI.sqrt().recip()).abs() < 1e-15);
    }

    #[test]
    fn dirichlet_reference_value() {
        let v = dirichlet_kernel(ComplexTime::real(0.25).unwrap(), 1.0, 1.0, &[]).unwrap();
        let exact = (1.0 - (-4.0f64).exp()) / PI.sqrt();
        assert!((v.re - exact).abs() < 1e-15);
        assert!((v.re - 0.553856).abs() < 1e-6);
        assert_eq!(dirichlet_kernel(ComplexTime::real(0.25).unwrap(), 1.0, 0.0, &[]).unwrap(), C64::new(0.0, 0.0));
        assert!(dirichlet_kernel(ComplexTime::real(0.25).unwrap(), -1.0, 1.0, &[]).is_err());
    }

    #[test]
    fn one_minus_exp_is_accurate_for_tiny_arguments() {
        let w = C64::new(1e-12, 3e-13);
        let v = one_minus_exp_neg(w, 1.0);
        // 1 - e^{-w} = w - w²/2 + ...
        let series = w - w * w / 2.0;
        assert!(((v - series) / series).norm() < 1e-12);
    }

    #[test]
    fn interval_kernel_reference_and_errors() {
        let s = IntervalSpectrum::new(8).unwrap();
        let v = interval_kernel(1.0, 0.5, 0.5, &s).unwrap();
        let exact = 2.0 * (-PI * PI).exp() * (1.0 + (-8.0 * PI * PI).exp());
        assert!((v.value - exact).abs() < 1e-18);
        assert!((v.value - 1.03447e-4).abs() < 1e-9);
        assert_eq!(interval_kernel(1.0, 0.0, 0.3, &s).unwrap().value, 0.0);
        match interval_kernel(1e-4, 0.5, 0.5, &s) {
            Err(LabError::IncreaseModes { needed, .. }) => assert!(needed > 8),
            other => panic!("expected mode error, got {other:?}"),
        }
    }

    #[test]
    fn mu_ball_matches_full_disc_and_quadrature() {
        assert!((mu_ball(2.0, 1.0) - 2.0 * PI).abs() < 1e-14);
        // brute force for a ball cut by the boundary
        let (x1, r) = (0.3, 1.0);
        let m = 2000;
        let mut s = 0.0;
        for i in 0..m {
            let a = x1 - r + (i as f64 + 0.5) * 2.0 * r / m as f64;
            if a <= 0.0 {
                continue;
            }
            s += a * 2.0 * (r * r - (a - x1).powi(2)).max(0.0).sqrt() * 2.0 * r / m as f64;
        }
        assert!((mu_ball(x1, r) - s).abs() < 1e-5);
    }

    #[test]
    fn paper_constant_in_unit_region() {
        // x₁ ≤ 1 at t = 1/4: (1 - e^{-4x₁y₁})/y₁ ≤ 4
        for i in 1..50 {
            for j in 1..50 {
                let (a, b) = (i as f64 / 50.0, j as f64 / 5.0);
                assert!(-(-4.0 * a * b).exp_m1() / b <= 4.0);
            }
        }
        assert!(domination_constant() >= 8.0 * 0.25f64.exp());
    }
}
