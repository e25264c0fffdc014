use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64 as C64;

use heatcalc::kernels::ComplexTime;
use heatcalc::operators::*;
use heatcalc::weighted_spaces::*;

fn grid(n: usize, x_max: f64) -> Arc<GradedGrid> {
    Arc::new(make_graded_grid(n, x_max, 2.0).unwrap())
}

fn at(f: &GridFunction, x: f64) -> C64 {
    let (s, l) = f.grid.cubic_stencil(x);
    (0..4).map(|j| f.values[s + j] * l[j]).sum()
}

fn rel(a: &GridFunction, b: &GridFunction, p: f64, w: &PowerWeight) -> f64 {
    lp_norm(&a.sub(b), p, w).unwrap() / lp_norm(b, p, w).unwrap()
}

fn odd_gauss(g: &Arc<GradedGrid>) -> GridFunction {
    GridFunction::from_fn(g, |x| x * (-x * x).exp())
}

#[test]
fn odd_gaussian_evolution_closed_form() {
    let g = grid(512, 40.0);
    let u = apply_semigroup(&odd_gauss(&g), ComplexTime::real(0.25).unwrap(), &PowerWeight::half_line(0.0)).unwrap();
    assert!((at(&u, 1.0).re - 0.214441).abs() < 1e-5);
    // complex times: (1+4z)^{-3/2} x e^{-x²/(1+4z)}
    for (t, d) in [(0.25, 1.0), (0.5, -0.7)] {
        let z = ComplexTime::new(t, d).unwrap();
        let u = apply_semigroup(&odd_gauss(&g), z, &PowerWeight::half_line(0.0)).unwrap();
        let a = 1.0 + 4.0 * z.z();
        let exact = GridFunction::from_complex_fn(&g, move |x| x / a.powf(1.5) * (-x * x / a).exp());
        assert!(rel(&u, &exact, 2.0, &PowerWeight::half_line(1.0)) < 5e-3);
    }
}

#[test]
fn strong_continuity_at_small_time() {
    let g = grid(512, 40.0);
    let f = GridFunction::from_fn(&g, |x| if x < 3.0 { x * x * (3.0 - x).powi(3) } else { 0.0 });
    for (p, gamma) in [(2.0, 0.0), (3.0, 2.0)] {
        let w = PowerWeight::half_line(gamma);
        let u = apply_semigroup(&f, ComplexTime::real(1e-4).unwrap(), &w).unwrap();
        assert!(rel(&u, &f, p, &w) <= 0.02);
    }
}

#[test]
fn semigroup_law_and_dirichlet_invariance() {
    let g = grid(512, 40.0);
    let f = odd_gauss(&g);
    let w = PowerWeight::half_line(2.0);
    let t = |s: f64| ComplexTime::real(s).unwrap();
    let a = apply_semigroup(&apply_semigroup(&f, t(0.1), &w).unwrap(), t(0.2), &w).unwrap();
    let b = apply_semigroup(&f, t(0.3), &w).unwrap();
    assert!(rel(&a, &b, 2.0, &w) < 1e-3);
    // near the boundary T(z)f behaves like a multiple of x
    let ratio = (b.values[0] / g.nodes[0]).norm() / (b.values[1] / g.nodes[1]).norm();
    assert!((ratio - 1.0).abs() < 1e-3);
}

#[test]
fn resolvent_closed_form_and_identity() {
    let g = grid(256, 40.0);
    let w = PowerWeight::half_line(2.0);
    let f = GridFunction::from_fn(&g, |x| 2.0 * (-x).exp());
    let u = apply_resolvent(&f, C64::new(1.0, 0.0), &w, DEFAULT_LAPLACE_NODES).unwrap();
    assert!((at(&u, 1.0).re - (-1.0f64).exp()).abs() < 1e-4);

    let h = odd_gauss(&g);
    let (l, m) = (C64::new(1.0, 0.0), C64::new(2.0, 1.0));
    let rl = apply_resolvent(&h, l, &w, DEFAULT_LAPLACE_NODES).unwrap();
    let rm = apply_resolvent(&h, m, &w, DEFAULT_LAPLACE_NODES).unwrap();
    let rlm = apply_resolvent(&rm, l, &w, DEFAULT_LAPLACE_NODES).unwrap();
    let resid = rl.sub(&rm).sub(&rlm.scale(m - l));
    assert!(lp_norm(&resid, 2.0, &w).unwrap() <= 1e-6 * lp_norm(&h, 2.0, &w).unwrap());
}

#[test]
fn resolvent_rejects_spectrum() {
    let g = grid(64, 10.0);
    let f = odd_gauss(&g);
    let e = apply_resolvent(&f, C64::new(-1.0, 0.0), &PowerWeight::half_line(0.0), 50).unwrap_err();
    assert_eq!(e.class(), "spectrum");
}

#[test]
fn lambda_resolvent_approximates_identity() {
    let g = grid(256, 40.0);
    let w = PowerWeight::half_line(0.5);
    let f = odd_gauss(&g);
    let errs: Vec<f64> = [1.0, 10.0, 100.0]
        .iter()
        .map(|&l| {
            let u = apply_resolvent(&f, C64::new(l, 0.0), &w, DEFAULT_LAPLACE_NODES).unwrap();
            rel(&u.scale(C64::new(l, 0.0)), &f, 2.0, &w)
        })
        .collect();
    assert!(errs.windows(2).all(|e| e[1] < e[0]), "{errs:?}");
}

#[test]
fn resolvent_commutes_with_semigroup() {
    let g = grid(256, 40.0);
    let w = PowerWeight::half_line(1.0);
    let f = odd_gauss(&g);
    let z = ComplexTime::new(0.5, 0.4).unwrap();
    let l = C64::new(2.0, 0.5);
    let a = apply_semigroup(&apply_resolvent(&f, l, &w, DEFAULT_LAPLACE_NODES).unwrap(), z, &w).unwrap();
    let b = apply_resolvent(&apply_semigroup(&f, z, &w).unwrap(), l, &w, DEFAULT_LAPLACE_NODES).unwrap();
    assert!(rel(&a, &b, 2.0, &w) < 1e-4);
}

#[test]
fn odd_extension_properties_and_oracle() {
    let g = grid(512, 40.0);
    let f = GridFunction::from_fn(&g, |x| 2.0 * (-x).exp() * if x < 15.0 { 1.0 } else { 0.0 });
    let e = odd_extension(&f).unwrap();
    let n = g.n;
    for i in 0..n {
        assert_eq!(e.nodes[n - 1 - i], -e.nodes[n + i]);
        assert_eq!(e.values[n - 1 - i], -e.values[n + i]);
    }
    for (p, gamma) in [(2.0, 0.0), (3.0, 1.5)] {
        let lhs = e.lp_norm(p, gamma).powf(p);
        let rhs = 2.0 * lp_norm(&f, p, &PowerWeight::half_line(gamma)).unwrap().powf(p);
        assert!((lhs / rhs - 1.0).abs() < 1e-12);
    }
    for gamma in [0.0, 0.5] {
        let w = PowerWeight::half_line(gamma);
        let a = apply_resolvent(&f, C64::new(1.0, 0.0), &w, DEFAULT_LAPLACE_NODES).unwrap();
        let b = odd_extension_solve(&f, 1.0, &w).unwrap();
        assert!(rel(&a, &b, 2.0, &w) < 0.02);
    }
}

#[test]
fn norm_estimator_reference_cases() {
    let g = grid(128, 40.0);
    let id = DenseOperator::identity(128);
    let e = operator_norm_estimate(&id, &g, 3.0, &PowerWeight::half_line(0.7), 2).unwrap();
    assert!((e.value - 1.0).abs() < 1e-12);
    for n in [128, 256] {
        let g = grid(n, 40.0);
        let m = semigroup_matrix(&g, ComplexTime::real(1.0).unwrap()).unwrap();
        let e = operator_norm_estimate(&m, &g, 2.0, &PowerWeight::half_line(0.0), 2).unwrap();
        assert!(e.value <= 1.0 + 1e-6, "n = {n}: {}", e.value);
    }
}

#[test]
fn angle_uniformity() {
    let g = grid(128, 40.0);
    for (p, gamma) in [(2.0, 0.5), (2.0, 2.0)] {
        let w = PowerWeight::half_line(gamma);
        let est = |d: f64| {
            let m = semigroup_matrix(&g, ComplexTime::new(1.0, d).unwrap()).unwrap();
            operator_norm_estimate(&m, &g, p, &w, 2).unwrap().value
        };
        let base = est(0.0);
        for d in [PI / 8.0, PI / 4.0, 3.0 * PI / 8.0] {
            let v = est(d);
            assert!(v.is_finite() && v * d.cos().powi(2) <= 1.5 * base, "γ = {gamma}, δ = {d}: {v} vs {base}");
        }
    }
}

#[test]
fn rational_symbol_matches_resolvents() {
    let g = grid(256, 40.0);
    let w = PowerWeight::half_line(0.5);
    let f = odd_gauss(&g);
    let contour = SectorContour::default();
    let engine = HinfEngine::new(&f, &contour, &w).unwrap();
    let (h, _) = engine.apply(&HolomorphicSymbol::rational_example()).unwrap();
    let one = C64::new(1.0, 0.0);
    let r = apply_resolvent(&f, one, &w, DEFAULT_LAPLACE_NODES).unwrap();
    let rr = apply_resolvent(&r, one, &w, DEFAULT_LAPLACE_NODES).unwrap();
    assert!(rel(&h, &r.sub(&rr), 2.0, &w) < 1e-4);
    let zero = HolomorphicSymbol::new("zero", Arc::new(|_| C64::new(0.0, 0.0)), 1.0, 1.0).unwrap();
    let (z, _) = engine.apply(&zero).unwrap();
    assert!(z.values.iter().all(|v| v.norm() == 0.0));
}
