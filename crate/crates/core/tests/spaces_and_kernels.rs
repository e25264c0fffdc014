use std::f64::consts::PI;
use std::sync::Arc;

use heatcalc::kernels::*;
use heatcalc::report::{classify_trend, max_relative_change, Trend};
use heatcalc::weighted_spaces::*;

fn half_line(n: usize, x_max: f64, g: f64) -> Arc<GradedGrid> {
    Arc::new(make_graded_grid(n, x_max, g).unwrap())
}

#[test]
fn nodes_increase_for_all_gradings() {
    for n in [16, 64, 257] {
        for g in [1.0, 1.5, 2.0, 3.0] {
            let grid = make_graded_grid(n, 7.0, g).unwrap();
            assert!(grid.nodes.windows(2).all(|w| w[1] > w[0]));
            assert!(grid.nodes[0] > 0.0 && *grid.nodes.last().unwrap() < 7.0);
        }
    }
}

#[test]
fn monomial_quadrature_improves_under_doubling() {
    for gamma in [-0.5, 0.5, 2.0] {
        for a in [0.0, gamma, gamma + 1.0, gamma + 2.0] {
            let exact = 1.0 / (a + 1.0);
            let mut last = f64::INFINITY;
            for n in [64, 128, 256, 512] {
                let grid = make_graded_grid(n, 1.0, 3.0).unwrap();
                let v: Vec<f64> = grid.nodes.iter().map(|x| x.powf(a)).collect();
                let err = ((grid.integrate(&v) - exact) / exact).abs();
                assert!(err <= grid.quadrature_tolerance(a), "a = {a}, n = {n}: {err}");
                assert!(err <= last * 1.0001 || err < 1e-13, "a = {a}: error rose from {last} to {err}");
                last = err;
            }
        }
    }
}

#[test]
fn norm_homogeneity_under_dilation() {
    let grid = half_line(1024, 80.0, 2.0);
    let (p, gamma) = (2.5, 1.3);
    let w = PowerWeight::half_line(gamma);
    let base = lp_norm(&GridFunction::from_fn(&grid, |x| x * (-x).exp()), p, &w).unwrap();
    for r in [0.5, 2.0, 4.0] {
        let fr = GridFunction::from_fn(&grid, move |x| r * x * (-r * x).exp());
        let got = lp_norm(&fr, p, &w).unwrap();
        let want = r.powf(-(1.0 + gamma) / p) * base;
        assert!((got / want - 1.0).abs() < 0.01, "r = {r}: {got} vs {want}");
    }
}

#[test]
fn seminorm_dilation_law() {
    let grid = half_line(1024, 80.0, 2.0);
    let (p, gamma, k) = (2.0, 1.0, 2);
    let w = PowerWeight::half_line(gamma);
    let base = sobolev_seminorm(&GridFunction::from_fn(&grid, |x| x * x * (-x).exp()), k, p, &w).unwrap().value;
    for r in [0.5, 2.0] {
        let fr = GridFunction::from_fn(&grid, move |x| (r * x).powi(2) * (-r * x).exp());
        let got = sobolev_seminorm(&fr, k, p, &w).unwrap().value;
        let want = r.powf(k as f64 - (1.0 + gamma) / p) * base;
        assert!((got / want - 1.0).abs() < 0.01, "r = {r}: {got} vs {want}");
    }
}

fn time_fn(n: usize, f: impl Fn(f64) -> f64) -> GridFunction {
    let tg = Arc::new(make_time_grid(n, 1.0, 1.0).unwrap());
    GridFunction::from_fn(&tg, f)
}

#[test]
fn besov_of_linear_function_is_stable() {
    let vals: Vec<f64> = [64, 128, 256].iter().map(|&n| besov_time_seminorm(&time_fn(n, |t| t), 0.5, 2.0).unwrap().value).collect();
    assert!(vals.iter().all(|v| v.is_finite() && *v > 0.0));
    assert!(max_relative_change(&vals) < 0.1, "{vals:?}");
}

#[test]
fn besov_detects_hoelder_membership() {
    let g = |t: f64| t.powf(0.25);
    let ns = [64, 128, 256, 512];
    let inside: Vec<f64> = ns.iter().map(|&n| besov_time_seminorm(&time_fn(n, g), 0.2, 2.0).unwrap().value).collect();
    let outside: Vec<f64> = ns.iter().map(|&n| besov_time_seminorm(&time_fn(n, g), 0.9, 2.0).unwrap().value).collect();
    assert_ne!(classify_trend(&inside), Trend::Growing, "{inside:?}");
    assert!(max_relative_change(&inside[1..]) < 0.1, "{inside:?}");
    // t^{1/4} misses B^{0.9}_{2,2} by 0.15 derivatives, so each doubling adds about 2^{0.15}
    assert!(outside.windows(2).all(|w| w[1] > 1.1 * w[0]), "{outside:?}");
    assert_eq!(besov_time_seminorm(&time_fn(64, |_| 3.0), 0.5, 2.0).unwrap().value, 0.0);
}

#[test]
fn ap_dichotomy_on_test_lattice() {
    for p in [1.5, 2.0, 3.0] {
        for gamma in [-0.5, 0.0, 0.5, p - 1.0 - 0.25, p - 1.0 + 0.25, 1.5 * (p - 1.0)] {
            let est = ap_constant_estimate(gamma, p, 10).unwrap();
            let ap = gamma > -1.0 && gamma < p - 1.0;
            let stable = !est.divergent && est.value.is_finite() && max_relative_change(&est.per_level[8..]) < 0.01;
            assert_eq!(stable, ap, "p = {p}, γ = {gamma}: {:?}", est.per_level);
        }
    }
    let e = ap_constant_estimate(0.5, 2.0, 6).unwrap();
    assert!(!e.divergent);
    assert!(ap_constant_estimate(1.5, 2.0, 6).unwrap().divergent);
}

#[test]
fn gaussian_integrates_to_one() {
    let grid = make_graded_grid(2048, 40.0, 1.0).unwrap();
    for t in [0.05, 0.25, 1.0, 4.0] {
        let z = ComplexTime::real(t).unwrap();
        let v: Vec<f64> = grid.nodes.iter().map(|&x| 2.0 * gauss_kernel(z, &[x]).re).collect();
        assert!((grid.integrate(&v) - 1.0).abs() < 1e-10, "t = {t}");
    }
    let z = ComplexTime::new(0.25, PI / 4.0).unwrap();
    assert!((gauss_kernel(z, &[0.0]).norm() - PI.powf(-0.5)).abs() < 1e-12);
}

#[test]
fn kernel_positivity_symmetry_and_domination() {
    let pts: Vec<f64> = (0..40).map(|i| 0.01 * 1.2f64.powi(i)).collect();
    for t in [0.01, 0.25, 3.0] {
        let z = ComplexTime::real(t).unwrap();
        for &x in &pts {
            for &y in &pts {
                let h = dirichlet_kernel(z, x, y, &[]).unwrap().re;
                let g = gauss_kernel(z, &[x - y]).re;
                assert!(h >= 0.0 && h <= g * (1.0 + 1e-12) + 1e-300, "t = {t}, ({x}, {y})");
                assert_eq!(h, dirichlet_kernel(z, y, x, &[]).unwrap().re);
            }
        }
    }
    assert_eq!(dirichlet_kernel(ComplexTime::real(1.0).unwrap(), 1.0, 0.0, &[]).unwrap().norm(), 0.0);
}

#[test]
fn complex_ray_domination_from_pointwise_chain() {
    let pts: Vec<f64> = (0..64).map(|i| 1e-3 * (1e4f64).powf(i as f64 / 63.0)).collect();
    for delta in [PI / 8.0, PI / 4.0, 3.0 * PI / 8.0] {
        for t in [0.25, 1.0] {
            let r = complex_ray_domination(ComplexTime::new(t, delta).unwrap(), &pts);
            assert!(r.pairs > 3000);
            assert_eq!(r.violations, 0, "δ = {delta}, t = {t}: worst {}", r.worst_ratio);
            // the t cos δ form is not implied by the chain and fails off the diagonal
            assert!(r.short_form_violations > 0);
        }
    }
}

#[test]
fn chapman_kolmogorov() {
    let grid = make_graded_grid(4096, 30.0, 1.5).unwrap();
    let (s, t) = (0.3, 0.5);
    let (ks, kt, kst) = (
        HalfLineKernel::new(ComplexTime::real(s).unwrap()),
        HalfLineKernel::new(ComplexTime::real(t).unwrap()),
        HalfLineKernel::new(ComplexTime::real(s + t).unwrap()),
    );
    for &(x, y) in &[(0.1, 0.2), (1.0, 1.0), (0.5, 2.5), (3.0, 0.05)] {
        let v: Vec<f64> = grid.nodes.iter().map(|&u| ks.eval_real(x, u) * kt.eval_real(u, y)).collect();
        let lhs = grid.integrate(&v);
        let rhs = kst.eval_real(x, y);
        assert!((lhs - rhs).abs() <= 1e-6 * rhs.abs().max(1e-3), "({x}, {y}): {lhs} vs {rhs}");
    }
}

#[test]
fn interval_kernel_symmetry_and_sub_markov() {
    let spec = IntervalSpectrum::new(IntervalSpectrum::modes_needed(0.01, MODE_TOLERANCE)).unwrap();
    let grid = make_interval_grid(256, 2.0).unwrap();
    for t in [0.01, 0.1, 1.0] {
        for &x in &[0.03, 0.3, 0.5, 0.91] {
            for &y in &[0.07, 0.5, 0.77] {
                assert_eq!(interval_kernel(t, x, y, &spec).unwrap().value, interval_kernel(t, y, x, &spec).unwrap().value);
            }
            let v: Vec<f64> = grid.nodes.iter().map(|&y| interval_kernel(t, x, y, &spec).unwrap().value).collect();
            assert!(grid.integrate(&v) <= 1.0 + 1e-9, "t = {t}, x = {x}");
        }
    }
    let v = interval_kernel(1.0, 0.5, 0.5, &spec).unwrap().value;
    assert!((v - 2.0 * (-PI * PI).exp()).abs() < 1e-12);
}

#[test]
fn domination_ratio_is_scale_invariant() {
    let pairs = domination_lattice(30, 1e-2, 5.0);
    let base = gaussian_domination_check(0.25, &pairs);
    for s in [0.5f64, 3.0] {
        let scaled: Vec<SamplePair> =
            pairs.iter().map(|(x, y)| ([x[0] * s, x[1] * s], [y[0] * s, y[1] * s])).collect();
        let r = gaussian_domination_check(0.25 * s * s, &scaled);
        assert!((r.value / base.value - 1.0).abs() < 1e-9, "s = {s}");
    }
}
