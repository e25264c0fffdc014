//! Schur-test constants for the kernel k(x,y) = y (x/y)^a (e^{-(x-y)²} - e^{-(x+y)²}),
//! a = (γ+1)/p:  A = sup_x ∫ k dy/y,  B = sup_y ∫ k dx/x.
//!
//! Both reduce to J(x, c) = ∫₀^∞ (x/y)^c D(x,y) dy with c = a for A and c = 1 - a for B.

use serde::Serialize;

use crate::error::{LabError, Result};
use crate::quad::integrate;
use crate::report::{classify_trend, max_relative_change, Trend};

/// Lower limits η with which J is integrated over [η, ∞); growth across them flags divergence.
pub const SCHUR_TRUNCATIONS: [f64; 4] = [1e-2, 1e-4, 1e-8, 1e-16];
const SCAN_LO: f64 = 1e-4;
const SCAN_HI: f64 = 1e4;
const SCAN_POINTS: usize = 81;

#[derive(Clone, Debug, Serialize)]
pub struct SchurValue {
    /// Sup at the finest truncation.
    pub value: f64,
    pub divergent: bool,
    pub argmax: f64,
    pub per_level: Vec<f64>,
    /// Relative change between the last two truncations.
    pub last_change: f64,
    pub trend: Trend,
}

#[derive(Clone, Debug, Serialize)]
pub struct SchurConstants {
    pub p: f64,
    pub gamma: f64,
    pub a: SchurValue,
    pub b: SchurValue,
}

/// J(x, c) truncated to y ≥ η, by adaptive quadrature in log y. For c < 2 the piece below η
/// is added from D(x,y) = 4xy e^{-x²} + O(y³); for c ≥ 2 that piece is infinite and left out.
pub fn schur_inner(x: f64, c: f64, eta: f64) -> f64 {
    let head = if c < 2.0 { 4.0 * x.powf(c + 1.0) * (-x * x).exp() * eta.powf(2.0 - c) / (2.0 - c) } else { 0.0 };
    let hi = x + 12.0;
    if eta >= hi {
        return head;
    }
    let g = |s: f64| {
        let y = s.exp();
        let d = -(-4.0 * x * y).exp_m1();
        (c * (x / y).ln() - (x - y) * (x - y)).exp() * d * y
    };
    let mut breaks = vec![eta.ln()];
    for b in [x - 12.0, x - 3.0, x - 1.0, x, x + 1.0, x + 3.0] {
        if b > eta && b < hi {
            breaks.push(b.ln());
        }
    }
    breaks.push(hi.ln());
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let mut total = 0.0;
    for w in breaks.windows(2) {
        let (v, _) = integrate(g, w[0], w[1], 1e-15, 1e-11);
        total += v;
    }
    total + head
}

fn sup_over_x(c: f64, eta: f64) -> (f64, f64) {
    let (l0, l1) = (SCAN_LO.ln(), SCAN_HI.ln());
    let step = (l1 - l0) / (SCAN_POINTS - 1) as f64;
    let f = |l: f64| schur_inner(l.exp(), c, eta);
    let (mut best_l, mut best) = (l0, f64::NEG_INFINITY);
    for k in 0..SCAN_POINTS {
        let l = l0 + k as f64 * step;
        let v = f(l);
        if v > best {
            best = v;
            best_l = l;
        }
    }
    // golden-section refinement on the bracketing scan cell
    let (mut a, mut b) = ((best_l - step).max(l0), (best_l + step).min(l1));
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..40 {
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        }
    }
    let (lm, vm) = if f1 > f2 { (x1, f1) } else { (x2, f2) };
    if vm > best {
        (vm, lm.exp())
    } else {
        (best, best_l.exp())
    }
}

fn schur_value(c: f64) -> SchurValue {
    let mut per_level = Vec::with_capacity(SCHUR_TRUNCATIONS.len());
    let mut argmax = 0.0;
    for &eta in &SCHUR_TRUNCATIONS {
        let (v, x) = sup_over_x(c, eta);
        per_level.push(v);
        argmax = x;
    }
    let trend = classify_trend(&per_level);
    let n = per_level.len();
    SchurValue {
        value: per_level[n - 1],
        divergent: trend == Trend::Growing,
        argmax,
        last_change: max_relative_change(&per_level[n - 2..]),
        per_level,
        trend,
    }
}

pub fn schur_constants(p: f64, gamma: f64) -> Result<SchurConstants> {
    if !(p >= 1.0 && p.is_finite()) || !gamma.is_finite() {
        return Err(LabError::Argument(format!("Schur constants need p >= 1 and finite γ, got p = {p}, γ = {gamma}")));
    }
    let a = (gamma + 1.0) / p;
    Ok(SchurConstants { p, gamma, a: schur_value(a), b: schur_value(1.0 - a) })
}
