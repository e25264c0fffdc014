use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64 as C64;
use proptest::prelude::*;

use heatcalc::inequality_lab::{multiplication_inverse, multiplication_map};
use heatcalc::kernels::*;
use heatcalc::pde_solvers::*;
use heatcalc::weighted_spaces::*;

fn space() -> &'static Arc<GradedGrid> {
    static G: OnceLock<Arc<GradedGrid>> = OnceLock::new();
    G.get_or_init(|| Arc::new(make_graded_grid(96, 30.0, 2.0).unwrap()))
}

fn times() -> &'static Arc<GradedGrid> {
    static G: OnceLock<Arc<GradedGrid>> = OnceLock::new();
    G.get_or_init(|| Arc::new(make_time_grid(64, 2.0, 2.0).unwrap()))
}

fn profile(a: f64, s: f64) -> impl Fn(f64) -> f64 {
    move |x| x * (a + x) * (-s * x).exp()
}

fn max_abs(v: impl Iterator<Item = f64>) -> f64 {
    v.fold(0.0, |m, x| m.max(x.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn elliptic_is_linear(a in -3.0f64..3.0, b in -3.0f64..3.0, s in 0.5f64..2.0, lambda in 0.2f64..5.0) {
        let g = space();
        let (f1, f2) = (GridFunction::from_fn(g, profile(0.0, s)), GridFunction::from_fn(g, profile(1.0, 1.0)));
        let comb = f1.scale(C64::new(a, 0.0)).add(&f2.scale(C64::new(b, 0.0)));
        let u = |f: &GridFunction| solve_elliptic(f, lambda, 2.0, 2.0).unwrap().0;
        let (u1, u2, uc) = (u(&f1), u(&f2), u(&comb));
        let want = u1.scale(C64::new(a, 0.0)).add(&u2.scale(C64::new(b, 0.0)));
        let scale = max_abs(want.values.iter().map(|v| v.norm())).max(1e-12);
        prop_assert!(max_abs(uc.sub(&want).values.iter().map(|v| v.norm())) <= 1e-10 * scale);
    }

    #[test]
    fn elliptic_dilation(r in 0.5f64..2.0, lambda in 0.5f64..2.0) {
        // (r²λ - Δ)[u(r·)] = r² f(r·)
        let f = profile(0.5, 1.0);
        let big = Arc::new(make_graded_grid(256, 60.0, 2.0).unwrap());
        let (u, _) = solve_elliptic(&GridFunction::from_fn(&big, &f), lambda, 2.0, 0.5).unwrap();
        let small = Arc::new(make_graded_grid(256, 60.0 / r, 2.0).unwrap());
        let (ur, _) = solve_elliptic(&GridFunction::from_fn(&small, |x| r * r * f(r * x)), r * r * lambda, 2.0, 0.5).unwrap();
        let eval = |h: &GridFunction, x: f64| {
            let (st, l) = h.grid.cubic_stencil(x);
            (0..4).map(|j| h.values[st + j].re * l[j]).sum::<f64>()
        };
        for x in [0.1, 0.7, 2.0] {
            let (a, b) = (eval(&ur, x), eval(&u, r * x));
            prop_assert!((a - b).abs() <= 1e-3 * b.abs().max(1e-2), "x = {}: {} vs {}", x, a, b);
        }
    }

    #[test]
    fn forced_heat_superposition(a in -2.0f64..2.0, b in -2.0f64..2.0, w in 0.5f64..3.0) {
        let tg = &Arc::new(make_time_grid(64, 2.0, 1.0).unwrap());
        let sg = space();
        let f1 = SpaceTimeFunction::from_fn(tg, sg, |t, x| t * profile(0.0, 1.0)(x));
        let f2 = SpaceTimeFunction::from_fn(tg, sg, move |t, x| (w * t).sin() * profile(1.0, 2.0)(x));
        let comb = SpaceTimeFunction::new(
            tg.clone(), sg.clone(),
            f1.values.iter().zip(&f2.values).map(|(x, y)| a * x + b * y).collect(),
        ).unwrap();
        let u = |f: &SpaceTimeFunction| solve_heat_forced(f, 1.0, 2.0, 2.0, 2.0, 0.0).unwrap().0;
        let (u1, u2, uc) = (u(&f1), u(&f2), u(&comb));
        let want: Vec<f64> = u1.values.iter().zip(&u2.values).map(|(x, y)| a * x + b * y).collect();
        let scale = max_abs(want.iter().copied()).max(1e-12);
        prop_assert!(max_abs(uc.values.iter().zip(&want).map(|(x, y)| x - y)) <= 1e-10 * scale);
    }

    #[test]
    fn boundary_linear_and_causal(a in -2.0f64..2.0, c in 0.5f64..3.0, cut in 10usize..50, x in 0.01f64..3.0) {
        let tg = times();
        let g1 = |t: f64| t.sqrt();
        let g2 = move |t: f64| (c * t).sin();
        let b1 = BoundaryData::from_fn(tg, g1).unwrap();
        let b2 = BoundaryData::from_fn(tg, g2).unwrap();
        let bc = BoundaryData::from_fn(tg, move |t| a * g1(t) + g2(t)).unwrap();
        let t = tg.nodes[40];
        let lhs = boundary_solution_at(&bc, t, x);
        let rhs = a * boundary_solution_at(&b1, t, x) + boundary_solution_at(&b2, t, x);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + rhs.abs()));

        // data changed after t_cut cannot reach earlier times
        let t_cut = tg.nodes[cut];
        let changed = BoundaryData::from_fn(tg, move |s| if s > t_cut { g2(s) + 5.0 * (s - t_cut) } else { g2(s) }).unwrap();
        for &s in &tg.nodes[..=cut] {
            prop_assert_eq!(boundary_solution_at(&changed, s, x), boundary_solution_at(&b2, s, x));
        }
    }

    #[test]
    fn besov_homogeneous_and_subadditive(c in -4.0f64..4.0, k in 1.0f64..6.0, delta in 0.1f64..0.9) {
        let tg = times();
        let g = GridFunction::from_fn(tg, |t| t.powf(0.7));
        let h = GridFunction::from_fn(tg, move |t| (k * t).sin());
        let b = |f: &GridFunction| besov_time_seminorm(f, delta, 2.0).unwrap().value;
        let bg = b(&g);
        prop_assert!((b(&g.scale(C64::new(c, 0.0))) - c.abs() * bg).abs() <= 1e-10 * bg.max(1e-300) * c.abs().max(1.0));
        prop_assert!(b(&g.add(&h)) <= (bg + b(&h)) * (1.0 + 1e-12));
    }

    #[test]
    fn lp_norm_homogeneous_and_subadditive(c in -5.0f64..5.0, p in 1.0f64..4.0, gamma in -0.9f64..4.0, s in 0.3f64..3.0) {
        let g = space();
        let w = PowerWeight::half_line(gamma);
        let f = GridFunction::from_fn(g, profile(0.0, s));
        let h = GridFunction::from_fn(g, |x| (x).sin() * (-x).exp());
        let nf = lp_norm(&f, p, &w).unwrap();
        prop_assert!((lp_norm(&f.scale(C64::new(c, 0.0)), p, &w).unwrap() - c.abs() * nf).abs() <= 1e-12 * nf * c.abs().max(1.0));
        prop_assert!(lp_norm(&f.add(&h), p, &w).unwrap() <= (nf + lp_norm(&h, p, &w).unwrap()) * (1.0 + 1e-12));
    }

    #[test]
    fn multiplication_map_round_trip(s in 0.3f64..3.0, a in 0.0f64..2.0) {
        let u = GridFunction::from_fn(space(), profile(a, s));
        let back = multiplication_inverse(&multiplication_map(&u));
        for (x, y) in back.values.iter().zip(&u.values) {
            prop_assert!((x - y).norm() <= 1e-15 * y.norm().max(1e-300));
        }
    }

    #[test]
    fn kernel_symmetry_and_bounds(t in 0.01f64..10.0, delta in -1.4f64..1.4, x in 0.0f64..8.0, y in 0.0f64..8.0) {
        let z = ComplexTime::new(t, delta).unwrap();
        let h = dirichlet_kernel(z, x, y, &[]).unwrap();
        prop_assert_eq!(h, dirichlet_kernel(z, y, x, &[]).unwrap());
        let real = ComplexTime::real(t).unwrap();
        let hr = dirichlet_kernel(real, x, y, &[]).unwrap().re;
        prop_assert!(hr >= 0.0 && hr <= gauss_kernel(real, &[x - y]).re * (1.0 + 1e-12) + 1e-300);
    }

    #[test]
    fn interval_kernel_symmetric(t in 0.02f64..2.0, x in 0.0f64..1.0, y in 0.0f64..1.0) {
        let spec = IntervalSpectrum::new(IntervalSpectrum::modes_needed(0.02, MODE_TOLERANCE)).unwrap();
        let a = interval_kernel(t, x, y, &spec).unwrap().value;
        prop_assert_eq!(a, interval_kernel(t, y, x, &spec).unwrap().value);
        prop_assert!(a <= 2.0 * (-PI * PI * t).exp() * IntervalSpectrum::modes_needed(0.02, MODE_TOLERANCE) as f64 + 1e-12);
    }
}
