//! Weighted Hardy, trace, interpolation and multiplication inequalities as computable
//! ratios, the Schur-test constants for T(1/4) and the sharpness example.

mod corpus;
mod schur;
mod sharpness;

pub use corpus::{default_corpus, load_corpus, parse_corpus, CorpusFunction, FnProfile, Kind, LabGrids, Profile};
pub use schur::{schur_constants, schur_inner, SchurConstants, SchurValue, SCHUR_TRUNCATIONS};
pub use sharpness::{sharpness_norm, sharpness_probe, SharpnessReport, SHARPNESS_TRUNCATIONS};

use crate::error::{LabError, Result};
use crate::report::{Bound, RatioReport};
use crate::weighted_spaces::{lp_norm, sobolev_norm, sobolev_seminorm, GridFunction, PowerWeight};

fn ratio_or_zero(num: f64, den: f64) -> f64 {
    if num == 0.0 {
        0.0
    } else if den == 0.0 {
        f64::INFINITY
    } else {
        num / den
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(LabError::Argument(format!("p = {p} must lie in (1, ∞)")));
    }
    Ok(())
}

/// Sharp Hardy constant p/|γ - p + 1|.
pub fn hardy_constant(p: f64, gamma: f64) -> f64 {
    p / (gamma - p + 1.0).abs()
}

/// ‖u‖_{Lᵖ(w_{γ-p})} / ‖u'‖_{Lᵖ(w_γ)} on one grid.
pub fn hardy_ratio_at(u: &GridFunction, p: f64, gamma: f64) -> Result<f64> {
    check_p(p)?;
    if (gamma - (p - 1.0)).abs() < 1e-12 {
        return Err(LabError::ExcludedExponent(format!("Hardy's inequality fails at γ = p - 1 = {gamma}")));
    }
    let num = lp_norm(u, p, &PowerWeight::half_line(gamma - p))?;
    let den = sobolev_seminorm(u, 1, p, &PowerWeight::half_line(gamma))?.value;
    Ok(ratio_or_zero(num, den))
}

pub fn hardy_ratio(u: &dyn Profile, p: f64, gamma: f64, grids: &LabGrids) -> Result<RatioReport> {
    let gs = grids.grids_for(u)?;
    let vals = gs.iter().map(|g| hardy_ratio_at(&u.sample(g), p, gamma)).collect::<Result<Vec<_>>>()?;
    let mut witness = u.name().to_string();
    if gamma < p - 1.0 && u.eval(0.0) != 0.0 {
        witness.push_str(" (u(0) != 0, outside the vanishing-trace branch)");
    }
    Ok(RatioReport::from_levels(grids.levels.clone(), vals, Bound::Value(hardy_constant(p, gamma)), witness))
}

pub(crate) fn check_trace_range(p: f64, gamma: f64, order: usize) -> Result<()> {
    let ok = match order {
        1 => (0.0..p - 1.0).contains(&gamma) || gamma < -1.0,
        2 => gamma > p - 1.0 && gamma < 2.0 * p - 1.0,
        _ => return Err(LabError::Argument(format!("trace embedding of order {order} not available"))),
    };
    if ok {
        Ok(())
    } else {
        Err(LabError::Range(format!("trace embedding of order {order} needs γ in its admissible range, got γ = {gamma}, p = {p}")))
    }
}

/// sup|u| / ‖u‖_{W^{order,p}(w_γ)} on one grid. For order 1 and γ < -1 the embedding forces a
/// vanishing trace, so inputs with u(0) ≠ 0 have a diverging denominator.
pub fn trace_embedding_ratio_at(u: &GridFunction, p: f64, gamma: f64, order: usize) -> Result<f64> {
    check_p(p)?;
    check_trace_range(p, gamma, order)?;
    let (s, l) = u.grid.cubic_stencil(0.0);
    let u0: f64 = (0..4).map(|j| u.values[s + j].re * l[j]).sum::<f64>().abs();
    let sup = (0..u.n()).map(|i| u.node_abs(i)).fold(u0, f64::max);
    let den = sobolev_norm(u, order, p, &PowerWeight::half_line(gamma))?;
    Ok(ratio_or_zero(sup, den))
}

pub fn trace_embedding_ratio(u: &dyn Profile, p: f64, gamma: f64, order: usize, grids: &LabGrids) -> Result<RatioReport> {
    let gs = grids.grids_for(u)?;
    let vals = gs.iter().map(|g| trace_embedding_ratio_at(&u.sample(g), p, gamma, order)).collect::<Result<Vec<_>>>()?;
    Ok(RatioReport::from_levels(grids.levels.clone(), vals, Bound::Finite, u.name().to_string()))
}

pub(crate) fn check_interp(p: f64, gamma: f64, j: usize, k: usize) -> Result<()> {
    check_p(p)?;
    if !(1 <= j && j < k && k <= 3) {
        return Err(LabError::Argument(format!("interpolation needs 1 <= j < k <= 3, got j = {j}, k = {k}")));
    }
    let excluded = (gamma + 1.0).abs() < 1e-12 || (gamma - (p - 1.0)).abs() < 1e-12;
    if !(gamma > -p - 1.0 && gamma < 2.0 * p - 1.0) || excluded {
        return Err(LabError::Range(format!("interpolation inequality needs γ in (-p-1, 2p-1) minus {{-1, p-1}}, got {gamma}")));
    }
    Ok(())
}

/// [u]_{W^{j,p}} / (‖u‖^{1-j/k} [u]_{W^{k,p}}^{j/k}), all with weight w_γ.
pub fn interpolation_ratio_at(u: &GridFunction, p: f64, gamma: f64, j: usize, k: usize) -> Result<f64> {
    check_interp(p, gamma, j, k)?;
    let w = PowerWeight::half_line(gamma);
    let num = sobolev_seminorm(u, j, p, &w)?.value;
    let th = j as f64 / k as f64;
    let den = lp_norm(u, p, &w)?.powf(1.0 - th) * sobolev_seminorm(u, k, p, &w)?.value.powf(th);
    Ok(ratio_or_zero(num, den))
}

pub fn interpolation_ratio(u: &dyn Profile, p: f64, gamma: f64, j: usize, k: usize, grids: &LabGrids) -> Result<RatioReport> {
    let gs = grids.grids_for(u)?;
    let vals = gs.iter().map(|g| interpolation_ratio_at(&u.sample(g), p, gamma, j, k)).collect::<Result<Vec<_>>>()?;
    Ok(RatioReport::from_levels(grids.levels.clone(), vals, Bound::Finite, u.name().to_string()))
}

/// (Mu)(x) = x u(x).
pub fn multiplication_map(u: &GridFunction) -> GridFunction {
    let d = u.value_dim;
    let mut v = u.clone();
    for (i, c) in v.values.iter_mut().enumerate() {
        *c *= u.grid.nodes[i / d];
    }
    v
}

/// (M⁻¹v)(x) = v(x)/x.
pub fn multiplication_inverse(v: &GridFunction) -> GridFunction {
    let d = v.value_dim;
    let mut u = v.clone();
    for (i, c) in u.values.iter_mut().enumerate() {
        *c /= v.grid.nodes[i / d];
    }
    u
}

pub(crate) fn check_mult(p: f64, gamma: f64, k: usize) -> Result<()> {
    check_p(p)?;
    if k > 2 {
        return Err(LabError::Argument(format!("multiplication map checked for k <= 2, got {k}")));
    }
    if !(gamma > -1.0 && gamma < 2.0 * p - 1.0) {
        return Err(LabError::Range(format!("M is an isomorphism for γ in (-1, 2p-1), got {gamma}")));
    }
    Ok(())
}

/// ‖Mu‖_{W^{k,p}(w_{γ-p})} / ‖u‖_{W^{k,p}(w_γ)}.
pub fn multiplication_map_ratio_at(u: &GridFunction, p: f64, gamma: f64, k: usize) -> Result<f64> {
    check_mult(p, gamma, k)?;
    let num = sobolev_norm(&multiplication_map(u), k, p, &PowerWeight::half_line(gamma - p))?;
    let den = sobolev_norm(u, k, p, &PowerWeight::half_line(gamma))?;
    Ok(ratio_or_zero(num, den))
}

/// ‖M⁻¹v‖_{W^{k,p}(w_γ)} / ‖v‖_{W^{k,p}(w_{γ-p})}, meant for v supported away from 0.
pub fn multiplication_inverse_ratio_at(v: &GridFunction, p: f64, gamma: f64, k: usize) -> Result<f64> {
    check_mult(p, gamma, k)?;
    let num = sobolev_norm(&multiplication_inverse(v), k, p, &PowerWeight::half_line(gamma))?;
    let den = sobolev_norm(v, k, p, &PowerWeight::half_line(gamma - p))?;
    Ok(ratio_or_zero(num, den))
}

pub fn multiplication_map_ratio(u: &dyn Profile, p: f64, gamma: f64, k: usize, grids: &LabGrids) -> Result<RatioReport> {
    let gs = grids.grids_for(u)?;
    let vals = gs.iter().map(|g| multiplication_map_ratio_at(&u.sample(g), p, gamma, k)).collect::<Result<Vec<_>>>()?;
    let bound = if k == 0 { Bound::Value(1.0) } else { Bound::Finite };
    Ok(RatioReport::from_levels(grids.levels.clone(), vals, bound, u.name().to_string()))
}
