//! The example f(x) = x^{-2} |log x|^{-β} on (0, 1/2): f ∈ Lᵖ(w_γ) for γ = 2p-1 and β > 1/p,
//! while T(t)f(x₀) = ∞. Truncating f to (ε, 1/2) gives T(t)f_ε(x₀) ≈ a + c (log 1/ε)^{1-β}.

use std::f64::consts::{LN_2, PI};

use serde::Serialize;

use crate::error::{LabError, Result};
use crate::kernels::{ComplexTime, HalfLineKernel};
use crate::quad::{integrate, linear_fit};
use crate::report::{Bound, Outcome, RatioReport};

pub const SHARPNESS_TRUNCATIONS: [f64; 3] = [1e-2, 1e-4, 1e-8];
pub const SHARPNESS_X0: f64 = 0.5;
const FIT_TOLERANCE: f64 = 0.05;

#[derive(Clone, Debug, Serialize)]
pub struct SharpnessReport {
    pub p: f64,
    pub gamma: f64,
    pub beta: f64,
    pub t: f64,
    /// ‖f‖_{Lᵖ(w_γ)}; None when it diverges.
    pub data_norm: Option<f64>,
    /// (log 2)^{1-βp}/(βp-1) raised to 1/p, available at γ = 2p-1.
    pub data_norm_closed_form: Option<f64>,
    pub truncations: Vec<f64>,
    pub values: Vec<f64>,
    pub fit_offset: f64,
    pub fit_coefficient: f64,
    /// lim_{y→0} H_t(x₀,y)/y / (1-β).
    pub predicted_coefficient: f64,
    /// max_k |value_k - fit_k| / value_k.
    pub fit_residual: f64,
    pub outcome: Outcome,
    pub report: RatioReport,
}

/// ‖x^{-2}|log x|^{-β} 1_{(0,1/2)}‖_{Lᵖ(w_γ)} by quadrature in v with -log x = log 2 · e^v.
pub fn sharpness_norm(p: f64, gamma: f64, beta: f64) -> f64 {
    let e = gamma - 2.0 * p + 1.0;
    let g = |v: f64| {
        let s = LN_2 * v.exp();
        (-e * s).exp() * s.powf(1.0 - beta * p)
    };
    let mut total = 0.0;
    for k in 0..16 {
        let (v, _) = integrate(g, 5.0 * k as f64, 5.0 * (k + 1) as f64, 1e-300, 1e-12);
        total += v;
    }
    total.powf(1.0 / p)
}

/// T(t)f_ε(x₀) = ∫_{log 2}^{log 1/ε} H_t(x₀, e^{-s}) e^{s} s^{-β} ds.
fn truncated_image(t: f64, beta: f64, eps: f64) -> Result<f64> {
    let k = HalfLineKernel::new(ComplexTime::real(t)?);
    let g = |s: f64| k.eval_real(SHARPNESS_X0, (-s).exp()) * s.exp() * s.powf(-beta);
    let hi = (1.0 / eps).ln();
    let mut breaks = vec![LN_2];
    let mut b = 1.0;
    while b < hi {
        if b > LN_2 {
            breaks.push(b);
        }
        b *= 2.0;
    }
    breaks.push(hi);
    Ok(breaks.windows(2).map(|w| integrate(g, w[0], w[1], 1e-14, 1e-12).0).sum())
}

pub fn sharpness_probe(p: f64, gamma: f64, beta: f64, t: f64) -> Result<SharpnessReport> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(LabError::Argument(format!("p = {p} must lie in (1, ∞)")));
    }
    if gamma < 2.0 * p - 1.0 - 1e-12 {
        return Err(LabError::Range(format!("the example lives at γ >= 2p-1, got γ = {gamma}")));
    }
    if !(beta > 0.0 && beta < 1.0) || !(t > 0.0) {
        return Err(LabError::Argument(format!("need β in (0, 1) and t > 0, got β = {beta}, t = {t}")));
    }
    let at_edge = (gamma - (2.0 * p - 1.0)).abs() < 1e-12;
    let norm_divergent = at_edge && beta * p <= 1.0 + 1e-12;
    let data_norm = (!norm_divergent).then(|| sharpness_norm(p, gamma, beta));
    let data_norm_closed_form =
        (at_edge && !norm_divergent).then(|| (LN_2.powf(1.0 - beta * p) / (beta * p - 1.0)).powf(1.0 / p));

    let values = SHARPNESS_TRUNCATIONS.iter().map(|&e| truncated_image(t, beta, e)).collect::<Result<Vec<_>>>()?;
    let powers: Vec<f64> = SHARPNESS_TRUNCATIONS.iter().map(|e| (1.0 / e).ln().powf(1.0 - beta)).collect();
    let (c, a, _) = linear_fit(&powers, &values);
    let fit_residual = values
        .iter()
        .zip(&powers)
        .map(|(v, l)| ((v - (a + c * l)) / v).abs())
        .fold(0.0, f64::max);
    let x0 = SHARPNESS_X0;
    let k0 = (4.0 * PI * t).powf(-0.5) * (-x0 * x0 / (4.0 * t)).exp() * x0 / t;
    let predicted = k0 / (1.0 - beta);

    let outcome = if norm_divergent {
        Outcome::ExpectedDivergenceConfirmed
    } else {
        let coeff_ok = ((c - predicted) / predicted).abs() < FIT_TOLERANCE;
        Outcome::from_bool(fit_residual < FIT_TOLERANCE && coeff_ok && values.windows(2).all(|w| w[1] > w[0]))
    };
    let levels = SHARPNESS_TRUNCATIONS.iter().map(|e| (-e.log10()).round() as usize).collect();
    let report = RatioReport::from_levels(
        levels,
        values.clone(),
        Bound::Finite,
        format!("x^-2 |log x|^-{beta} on (eps, 1/2), T({t})f at x0 = {x0}"),
    );
    Ok(SharpnessReport {
        p,
        gamma,
        beta,
        t,
        data_norm,
        data_norm_closed_form,
        truncations: SHARPNESS_TRUNCATIONS.to_vec(),
        values,
        fit_offset: a,
        fit_coefficient: c,
        predicted_coefficient: predicted,
        fit_residual,
        outcome,
        report,
    })
}
