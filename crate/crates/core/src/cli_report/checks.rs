//! Registry of sweepable checks. Each check declares its parameters with defaults, a cheap
//! precondition used by config validation and a run function.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64 as C64;

use super::config::GridSpec;
use crate::error::{arg_err, LabError, Result};
use crate::inequality_lab::{
    check_interp, check_mult, check_trace_range, hardy_constant, hardy_ratio, interpolation_ratio, multiplication_map_ratio,
    schur_constants, sharpness_probe, trace_embedding_ratio, FnProfile, LabGrids,
};
use crate::kernels::{domination_lattice, gaussian_domination_check, ComplexTime};
use crate::operators::{
    apply_resolvent, odd_extension_solve, operator_norm_estimate, semigroup_matrix, HinfEngine, HolomorphicSymbol, SectorContour,
    DEFAULT_LAPLACE_NODES,
};
use crate::pde_solvers::{
    interval_decay_rate, solve_elliptic, solve_heat_boundary, solve_heat_forced, trace_smoothness, BoundaryData, SpaceTimeFunction,
};
use crate::report::{classify_trend, Outcome, RatioReport, Trend};
use crate::weighted_spaces::{
    ap_constant_estimate, lp_norm, make_graded_grid, make_interval_grid, make_time_grid, GridFunction, PowerWeight,
};

pub type Params = BTreeMap<String, f64>;

/// Every parameter name a lattice may carry.
pub const PARAM_NAMES: &[&str] =
    &["p", "q", "gamma", "lambda", "t", "delta_angle", "beta", "mu", "tau", "alpha", "j", "k", "order", "m"];

#[derive(Clone, Debug, PartialEq)]
pub struct CheckValue {
    pub value: f64,
    pub bound: Option<f64>,
    pub outcome: Outcome,
    pub trend: Option<Trend>,
    /// The measured quantity grows without bound under refinement.
    pub divergent: bool,
    pub detail: BTreeMap<String, f64>,
}

impl CheckValue {
    fn new(value: f64, outcome: Outcome) -> Self {
        Self { value, bound: None, outcome, trend: None, divergent: false, detail: BTreeMap::new() }
    }

    fn with_levels(mut self, levels: &[usize], values: &[f64]) -> Self {
        for (l, v) in levels.iter().zip(values) {
            self.detail.insert(format!("level_{l}"), *v);
        }
        let trend = classify_trend(values);
        self.trend = Some(trend);
        self.divergent = trend == Trend::Growing;
        self
    }
}

pub struct Context<'a> {
    pub grid: &'a GridSpec,
    pub tolerances: &'a BTreeMap<String, f64>,
}

impl Context<'_> {
    fn tol(&self, id: &str, default: f64) -> f64 {
        self.tolerances.get(id).copied().unwrap_or(default)
    }

    fn lab_grids(&self) -> LabGrids {
        LabGrids { levels: self.grid.levels(), grading: self.grid.grading, x_max: Some(self.grid.x_max) }
    }
}

pub struct CheckSpec {
    pub id: &'static str,
    /// Declared parameters with their defaults, in lattice order.
    pub params: &'static [(&'static str, f64)],
    pub precondition: fn(&Params) -> Result<()>,
    pub run: fn(&Params, &Context) -> Result<CheckValue>,
}

impl CheckSpec {
    /// Cartesian product over the declared parameters, the first one outermost. Parameters
    /// missing from the lattice take their default; lattice entries the check does not
    /// declare are ignored.
    pub fn points(&self, lattice: &BTreeMap<String, Vec<f64>>) -> Vec<Params> {
        let mut out = vec![Params::new()];
        for (name, default) in self.params {
            let vals = lattice.get(*name).cloned().unwrap_or_else(|| vec![*default]);
            out = out
                .into_iter()
                .flat_map(|pt| {
                    vals.iter().map(move |v| {
                        let mut q = pt.clone();
                        q.insert(name.to_string(), *v);
                        q
                    })
                })
                .collect();
        }
        out
    }

    /// Declared defaults overridden by `given`.
    pub fn resolve(&self, given: &Params) -> Params {
        self.params
            .iter()
            .map(|(k, d)| (k.to_string(), given.get(*k).copied().unwrap_or(*d)))
            .collect()
    }
}

fn get(params: &Params, name: &str) -> f64 {
    params.get(name).copied().unwrap_or(f64::NAN)
}

fn p_of(params: &Params) -> Result<f64> {
    let p = get(params, "p");
    if !(p > 1.0 && p.is_finite()) {
        return arg_err(format!("p = {p} must lie in (1, ∞)"));
    }
    Ok(p)
}

fn gamma_in_range(params: &Params, excluded: &[f64]) -> Result<(f64, f64)> {
    let p = p_of(params)?;
    let gamma = get(params, "gamma");
    crate::pde_solvers::check_gamma(p, gamma, excluded)?;
    Ok((p, gamma))
}

fn as_index(params: &Params, name: &str) -> Result<usize> {
    let v = get(params, name);
    if !(v >= 0.0 && v.fract() == 0.0) {
        return arg_err(format!("{name} = {v} must be a nonnegative integer"));
    }
    Ok(v as usize)
}

fn ratio_value(r: &RatioReport, ok: bool, bound: Option<f64>) -> CheckValue {
    let mut cv = CheckValue::new(r.ratio, Outcome::from_bool(ok && r.refinement_trend != Trend::Growing));
    cv.bound = bound;
    cv.with_levels(&r.levels, &r.per_level)
}

fn xe() -> FnProfile {
    FnProfile::new("x e^-x", (0.0, 40.0), |x| x * (-x).exp())
}

fn x_gauss(x: f64) -> f64 {
    x * (-x * x).exp()
}

// --- inequality suite -----------------------------------------------------------------

fn pre_hardy(params: &Params) -> Result<()> {
    let p = p_of(params)?;
    if (get(params, "gamma") - (p - 1.0)).abs() < 1e-12 {
        return Err(LabError::ExcludedExponent("Hardy's inequality fails at γ = p - 1".into()));
    }
    Ok(())
}

fn run_hardy(params: &Params, ctx: &Context) -> Result<CheckValue> {
    let (p, gamma) = (p_of(params)?, get(params, "gamma"));
    let r = hardy_ratio(&xe(), p, gamma, &ctx.lab_grids())?;
    let slack = ctx.tol("hardy_ratio", 0.02);
    Ok(ratio_value(&r, r.within_bound(slack), Some(hardy_constant(p, gamma))))
}

fn trace_order(params: &Params) -> Result<usize> {
    match as_index(params, "order")? {
        0 if get(params, "gamma") < get(params, "p") - 1.0 => Ok(1),
        0 => Ok(2),
        k => Ok(k),
    }
}

fn pre_trace(params: &Params) -> Result<()> {
    check_trace_range(p_of(params)?, get(params, "gamma"), trace_order(params)?)
}

fn run_trace(params: &Params, ctx: &Context) -> Result<CheckValue> {
    let r = trace_embedding_ratio(&xe(), p_of(params)?, get(params, "gamma"), trace_order(params)?, &ctx.lab_grids())?;
    Ok(ratio_value(&r, r.within_bound(0.0), None))
}

fn pre_interp(params: &Params) -> Result<()> {
    check_interp(p_of(params)?, get(params, "gamma"), as_index(params, "j")?, as_index(params, "k")?)
}

fn run_interp(params: &Params, ctx: &Context) -> Result<CheckValue> {
    let (j, k) = (as_index(params, "j")?, as_index(params, "k")?);
    let r = interpolation_ratio(&xe(), p_of(params)?, get(params, "gamma"), j, k, &ctx.lab_grids())?;
    Ok(ratio_value(&r, r.within_bound(0.0), None))
}

fn pre_mult(params: &Params) -> Result<()> {
    check_mult(p_of(params)?, get(params, "gamma"), as_index(params, "k")?)
}

fn run_mult(params: &Params, ctx: &Context) -> Result<CheckValue> {
    let k = as_index(params, "k")?;
    let r = multiplication_map_ratio(&xe(), p_of(params)?, get(params, "gamma"), k, &ctx.lab_grids())?;
    let bound = (k == 0).then_some(1.0);
    Ok(ratio_value(&r, r.within_bound(ctx.tol("multiplication_map", 1e-6)), bound))
}

fn pre_schur(params: &Params) -> Result<()> {
    let p = p_of(params)?;
    let gamma = get(params, "gamma");
    if !(gamma >= p - 1.0 && gamma < 2.0 * p - 1.0) {
        return Err(LabError::Range(format!("the Schur test applies for γ in [p-1, 2p-1), got {gamma}")));
    }
    Ok(())
}

fn run_schur(params: &Params, _ctx: &Context) -> Result<CheckValue> {
    let s = schur_constants(p_of(params)?, get(params, "gamma"))?;
    let finite = s.a.value.is_finite() && s.b.value.is_finite();
    let divergent = s.a.divergent || s.b.divergent;
    let mut cv = CheckValue::new(s.a.value, Outcome::from_bool(finite && !divergent));
    cv.trend = Some(if s.a.divergent { s.a.trend } else { s.b.trend });
    cv.divergent = divergent;
    cv.detail.insert("A".into(), s.a.value);
    cv.detail.insert("B".into(), s.b.value);
    cv.detail.insert("A_last_change".into(), s.a.last_change);
    cv.detail.insert("B_last_change".into(), s.b.last_change);
    Ok(cv)
}

fn pre_sharpness(params: &Params) -> Result<()> {
    let p = p_of(params)?;
    let (gamma, beta, t) = (get(params, "gamma"), get(params, "beta"), get(params, "t"));
    if gamma < 2.0 * p - 1.0 - 1e-12 {
        return Err(LabError::Range(format!("the sharpness example lives at γ >= 2p-1, got {gamma}")));
    }
    if !(beta > 0.0 && beta < 1.0 && t > 0.0) {
        return arg_err(format!("need β in (0, 1) and t > 0, got β = {beta}, t = {t}"));
    }
    Ok(())
}

fn run_sharpness(params: &Params, _ctx: &Context) -> Result<CheckValue> {
    let s = sharpness_probe(p_of(params)?, get(params, "gamma"), get(params, "beta"), get(params, "t"))?;
    let mut cv = CheckValue::new(*s.values.last().unwrap_or(&f64::NAN), s.outcome);
    cv.trend = Some(s.report.refinement_trend);
    cv.divergent = s.values.windows(2).all(|w| w[1] > w[0]);
    cv.detail.insert("fit_coefficient".into(), s.fit_coefficient);
    cv.detail.insert("predicted_coefficient".into(), s.predicted_coefficient);
    cv.detail.insert("fit_residual".into(), s.fit_residual);
    if let Some(n) = s.data_norm {
        cv.detail.insert("data_norm".into(), n);
    }
    Ok(cv)
}

// --- operators ------------------------------------------------------------------------

fn pre_semigroup(params: &Params) -> Result<()> {
    p_of(params)?;
    ComplexTime::new(get(params, "t"), get(params, "delta_angle"))?;
    if !get(params, "gamma").is_finite() {
        return arg_err("gamma must be finite");
    }
    Ok(())
}

fn run_semigroup(params: &Params, ctx: &Context) -> Result<CheckValue> {
    let p = p_of(params)?;
    let z = ComplexTime::new(get(params, "t"), get(params, "delta_angle"))?;
    let w = PowerWeight::half_line(get(params, "gamma"));
    let levels = ctx.grid.levels();
    let mut vals = Vec::with_capacity(levels.len());
    for &n in &levels {
        let grid = Arc::new(make_graded_grid(n, ctx.grid.x_max, ctx.grid.grading)?);
        let m = semigroup_matrix(&grid, z)?;
        vals.push(operator_norm_estimate(&m, &grid, p, &w, 2)?.value);
    }
    let last = *vals.last().unwrap_or(&f64::NAN);
    let cv = CheckValue::new(last, Outcome::Pass).with_levels(&levels, &vals);
    let ok = last.is_finite() && !cv.divergent;
    Ok(CheckValue { outcome: Outcome::from_bool(ok), ..cv })
}

fn pre_resolvent(params: &Params) -> Result<()> {
    gamma_in_range(params, &[])?;
    if !(get(params, "lambda") > 0.0) {
        return Err(LabError::Solvability("the spectral oracle needs λ > 0".into()));
    }
    Ok(())
}

fn half_line_data(ctx: &Context) -> Result<(Arc<crate::weighted_spaces::GradedGrid>, GridFunction)> {
    let grid = Arc::new(make_graded_grid(ctx.grid.n, ctx.grid.x_max, ctx.grid.grading)?);
    let f = GridFunction::from_fn(&grid, x_gauss);
    Ok((grid, f))
}

fn run_resolvent(params: &Params, ctx: &Context) -> Result<CheckValue> {
    let (p, gamma) = gamma_in_range(params, &[])?;
    let lambda = get(params, "lambda");
    let w = PowerWeight::half_line(gamma);
    let (_, f) = half_line_data(ctx)?;
    let l = C64::new(lambda, 0.0);
    let a = apply_resolvent(&f, l, &w, DEFAULT_LAPLACE_NODES)?;
    let b = odd_extension_solve(&f, lambda, &w)?;
    let value = lp_norm(&a.sub(&b), p, &w)? / lp_norm(&b, p, &w)?;
    // R(λ) - R(μ) = (μ - λ) R(μ) R(λ)
    let mu = l + 1.0;
    let rm = apply_resolvent(&f, mu, &w, DEFAULT_LAPLACE_NODES)?;
    let rmr = apply_resolvent(&a, mu, &w, DEFAULT_LAPLACE_NODES)?;
    let resid = lp_norm(&a.sub(&rm).sub(&rmr.scale(mu - l)), p, &w)? / lp_norm(&f, p, &w)?;
    let bound = ctx.tol("resolvent_oracle", 0.02);
    let ok = value <= bound && resid <= ctx.tol("resolvent_identity", 1e-6);
    let mut cv = CheckValue::new(value, Outcome::from_bool(ok));
    cv.bound = Some(bound);
    cv.detail.insert("identity_residual".into(), resid);
    Ok(cv)
}

fn pre_hinf(params: &Params) -> Result<()> {
    gamma_in_range(params, &[])?;
    if !get(params, "tau").is_finite() {
        return arg_err("tau must be finite");
    }
    Ok(())
}

fn run_hinf(params: &Params, ctx: &Context) -> Result<CheckValue> {
    let (p, gamma) = gamma_in_range(params, &[])?;
    let w = PowerWeight::half_line(gamma);
    let (_, f) = half_line_data(ctx)?;
    let contour = SectorContour::default();
    let phi = HolomorphicSymbol::regularized_imaginary_power(get(params, "tau"), 0.1, contour.sigma)?;
    let (h, diag) = HinfEngine::new(&f, &contour, &w)?.apply(&phi)?;
    let value = lp_norm(&h, p, &w)? / lp_norm(&f, p, &w)?;
    let mut cv = CheckValue::new(value, Outcome::from_bool(value.is_finite()));
    cv.detail.insert("head_error".into(), diag.head_error);
    cv.detail.insert("tail_error".into(), diag.tail_error);
    cv.detail.insert("symbol_sup_hint".into(), phi.sup_norm_hint);
    Ok(cv)
}

fn pre_ap(params: &Params) -> Result<()> {
    p_of(params)?;
    if !get(params, "gamma").is_finite() {
        return arg_err("gamma must be finite");
    }
    Ok(())
}

fn run_ap(params: &Params, _ctx: &Context) -> Result<CheckValue> {
    let est = ap_constant_estimate(get(params, "gamma"), p_of(params)?, 6)?;
    let levels: Vec<usize> = (1..=est.per_level.len()).collect();
    let cv = CheckValue::new(est.value, Outcome::from_bool(!est.divergent)).with_levels(&levels, &est.per_level);
    Ok(CheckValue { divergent: est.divergent, trend: Some(est.trend), ..cv })
}

fn pre_domination(params: &Params) -> Result<()> {
    if !(get(params, "t") > 0.0) {
        return arg_err("t must be positive");
    }
    if as_index(params, "m")? < 2 {
        return arg_err("the sample lattice needs m >= 2");
    }
    Ok(())
}

fn run_domination(params: &Params, _ctx: &Context) -> Result<CheckValue> {
    let m = as_index(params, "m")?;
    let t = get(params, "t");
    let s = t.sqrt();
    let rep = gaussian_domination_check(t, &domination_lattice(m, 1e-3 * s, 10.0 * s));
    let mut cv = CheckValue::new(rep.value, rep.pass);
    cv.bound = rep.bound;
    cv.detail = rep.params;
    Ok(cv)
}

// --- solvers --------------------------------------------------------------------------

fn pre_elliptic(params: &Params) -> Result<()> {
    let p = p_of(params)?;
    crate::pde_solvers::check_gamma(p, get(params, "gamma"), &[p - 1.0])?;
    if !(get(params, "lambda") > 0.0) {
        return Err(LabError::Solvability("λ must be positive".into()));
    }
    Ok(())
}

fn run_elliptic(params: &Params, ctx: &Context) -> Result<CheckValue> {
    let (p, gamma, lambda) = (p_of(params)?, get(params, "gamma"), get(params, "lambda"));
    let x_max = ctx.grid.x_max.max(30.0 / lambda.sqrt());
    let grid = Arc::new(make_graded_grid(ctx.grid.n, x_max, ctx.grid.grading)?);
    let f = GridFunction::from_fn(&grid, |x| 2.0 * (-x).exp());
    let (_, rep) = solve_elliptic(&f, lambda, p, gamma)?;
    let mut cv = CheckValue::new(rep.value, Outcome::from_bool(rep.value.is_finite()));
    cv.detail = rep.params;
    Ok(cv)
}

fn pre_forced(params: &Params) -> Result<()> {
    pre_elliptic(params)?;
    let (q, mu) = (get(params, "q"), get(params, "mu"));
    if !(q > 1.0 && q.is_finite()) || !(mu > -1.0 && mu < q - 1.0) {
        return Err(LabError::Range(format!("need q > 1 and mu in (-1, q-1), got q = {q}, mu = {mu}")));
    }
    Ok(())
}

/// Forcing sin(πt/4)·x e^{-x²} on [0, 4], with max(n/4, 32) time nodes per n space nodes.
fn run_forced(params: &Params, ctx: &Context) -> Result<CheckValue> {
    let levels = ctx.grid.levels();
    let mut vals = Vec::with_capacity(levels.len());
    for &n in &levels {
        let sg = Arc::new(make_graded_grid(n, ctx.grid.x_max, ctx.grid.grading)?);
        let tg = Arc::new(make_time_grid((n / 4).max(32), 4.0, 1.0)?);
        let f = SpaceTimeFunction::from_fn(&tg, &sg, |t, x| (PI * t / 4.0).sin() * x_gauss(x));
        let (_, rep) = solve_heat_forced(
            &f,
            get(params, "lambda"),
            p_of(params)?,
            get(params, "q"),
            get(params, "gamma"),
            get(params, "mu"),
        )?;
        vals.push(rep.value);
    }
    let last = *vals.last().unwrap_or(&f64::NAN);
    let cv = CheckValue::new(last, Outcome::Pass).with_levels(&levels, &vals);
    Ok(CheckValue { outcome: Outcome::from_bool(last.is_finite() && !cv.divergent), ..cv })
}

pub const BOUNDARY_T_MAX: f64 = 3.0;
pub const BOUNDARY_TIME_GRADING: f64 = 8.0;

/// t^α, switched off smoothly over [1, 2].
pub fn rough_boundary_data(alpha: f64) -> impl Fn(f64) -> f64 + Send + Sync + Copy {
    move |t: f64| {
        let cut = if t <= 1.0 {
            1.0
        } else if t >= 2.0 {
            0.0
        } else {
            0.5 * (1.0 + (PI * (t - 1.0)).cos())
        };
        t.powf(alpha) * cut
    }
}

fn pre_boundary(params: &Params) -> Result<()> {
    let p = p_of(params)?;
    crate::pde_solvers::check_gamma(p, get(params, "gamma"), &[p - 1.0, 2.0 * p - 3.0])?;
    if !(get(params, "alpha") > 0.0) {
        return arg_err("alpha must be positive");
    }
    Ok(())
}

fn run_boundary(params: &Params, ctx: &Context) -> Result<CheckValue> {
    let (p, gamma) = (p_of(params)?, get(params, "gamma"));
    let g_fn = rough_boundary_data(get(params, "alpha"));
    let levels = ctx.grid.levels();
    let mut vals = Vec::with_capacity(levels.len());
    let mut dt = Vec::with_capacity(levels.len());
    for &n in &levels {
        let tg = Arc::new(make_time_grid(n, BOUNDARY_T_MAX, BOUNDARY_TIME_GRADING)?);
        let g = BoundaryData::from_fn(&tg, g_fn)?;
        let (_, rep) = solve_heat_boundary(&g, p, gamma)?;
        vals.push(rep.value);
        dt.push(rep.params["dt_norm"]);
    }
    let last = *vals.last().unwrap_or(&f64::NAN);
    let mut cv = CheckValue::new(last, Outcome::Pass).with_levels(&levels, &vals);
    cv.outcome = Outcome::from_bool(last.is_finite() && !cv.divergent);
    cv.detail.insert("delta".into(), trace_smoothness(p, gamma));
    for (l, v) in levels.iter().zip(&dt) {
        cv.detail.insert(format!("dt_norm_{l}"), *v);
    }
    Ok(cv)
}

fn pre_decay(params: &Params) -> Result<()> {
    let p = p_of(params)?;
    crate::pde_solvers::check_gamma(p, get(params, "gamma"), &[p - 1.0])
}

pub const DECAY_WINDOW: (f64, f64) = (0.3, 1.0);

fn run_decay(params: &Params, ctx: &Context) -> Result<CheckValue> {
    let n = ctx.grid.n + ctx.grid.n % 2;
    let grid = Arc::new(make_interval_grid(n, ctx.grid.grading)?);
    let f0 = GridFunction::from_fn(&grid, |x| x * (1.0 - x) * (1.0 + x));
    let rate = interval_decay_rate(&f0, p_of(params)?, get(params, "gamma"), DECAY_WINDOW)?;
    let target = -PI * PI;
    let mut cv = CheckValue::new(rate, Outcome::from_bool(((rate - target) / target).abs() <= ctx.tol("interval_decay", 0.01)));
    cv.bound = Some(target);
    Ok(cv)
}

static CHECKS: &[CheckSpec] = &[
    CheckSpec { id: "hardy_ratio", params: &[("p", 2.0), ("gamma", 2.0)], precondition: pre_hardy, run: run_hardy },
    CheckSpec {
        id: "trace_embedding",
        params: &[("p", 2.0), ("gamma", 0.5), ("order", 0.0)],
        precondition: pre_trace,
        run: run_trace,
    },
    CheckSpec {
        id: "interpolation",
        params: &[("p", 2.0), ("gamma", 2.0), ("j", 1.0), ("k", 2.0)],
        precondition: pre_interp,
        run: run_interp,
    },
    CheckSpec {
        id: "multiplication_map",
        params: &[("p", 2.0), ("gamma", 2.0), ("k", 0.0)],
        precondition: pre_mult,
        run: run_mult,
    },
    CheckSpec { id: "schur_constants", params: &[("p", 2.0), ("gamma", 2.0)], precondition: pre_schur, run: run_schur },
    CheckSpec {
        id: "sharpness_probe",
        params: &[("p", 2.0), ("gamma", 3.0), ("beta", 0.75), ("t", 1.0)],
        precondition: pre_sharpness,
        run: run_sharpness,
    },
    CheckSpec {
        id: "semigroup_norm",
        params: &[("p", 2.0), ("gamma", 0.5), ("t", 1.0), ("delta_angle", 0.0)],
        precondition: pre_semigroup,
        run: run_semigroup,
    },
    CheckSpec {
        id: "resolvent_oracle",
        params: &[("p", 2.0), ("gamma", 0.0), ("lambda", 1.0)],
        precondition: pre_resolvent,
        run: run_resolvent,
    },
    CheckSpec { id: "hinf_symbol", params: &[("p", 2.0), ("gamma", 0.5), ("tau", 0.0)], precondition: pre_hinf, run: run_hinf },
    CheckSpec {
        id: "elliptic_scaling",
        params: &[("p", 2.0), ("gamma", 2.0), ("lambda", 1.0)],
        precondition: pre_elliptic,
        run: run_elliptic,
    },
    CheckSpec {
        id: "heat_forced",
        params: &[("p", 2.0), ("q", 2.0), ("gamma", 2.0), ("mu", 0.0), ("lambda", 1.0)],
        precondition: pre_forced,
        run: run_forced,
    },
    CheckSpec {
        id: "boundary_max_reg",
        params: &[("p", 2.0), ("gamma", 2.5), ("alpha", 0.3)],
        precondition: pre_boundary,
        run: run_boundary,
    },
    CheckSpec { id: "interval_decay", params: &[("p", 2.0), ("gamma", 0.0)], precondition: pre_decay, run: run_decay },
    CheckSpec { id: "gaussian_domination", params: &[("t", 1.0), ("m", 100.0)], precondition: pre_domination, run: run_domination },
    CheckSpec { id: "ap_constant", params: &[("p", 2.0), ("gamma", 0.5)], precondition: pre_ap, run: run_ap },
];

pub fn all_checks() -> &'static [CheckSpec] {
    CHECKS
}

pub fn find_check(id: &str) -> Option<&'static CheckSpec> {
    CHECKS.iter().find(|c| c.id == id)
}

pub fn known_ids() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.id).collect()
}
