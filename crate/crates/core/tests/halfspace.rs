use fbstokes::halfspace::*;
use fbstokes::quadrature::chebyshev_points;
use fbstokes::rng::{complex_unit_box, complex_vec, sector_point, stream, uniform};
use fbstokes::symbols::*;
use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn xs_for(b: C64) -> Vec<f64> {
    chebyshev_points(32, 0.0, 10.0 / b.re)
}

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

#[test]
fn lopatinski_homogeneous_rhs() {
    let s = solve_lopatinski(1.2, C64::new(1.5, 0.4), 1.0, zero(), zero()).unwrap();
    assert_eq!((s.alpha_n, s.beta_n, s.omega), (zero(), zero(), zero()));
}

#[test]
fn lopatinski_closed_forms_match_generic_inverse() {
    let mut rng = stream(11, 1);
    for _ in 0..500 {
        let lambda = sector_point(&mut rng, PI / 4.0, 1.0, 1e3);
        let mu = uniform(&mut rng, 0.5, 2.0);
        let a = uniform(&mut rng, 0.01, 10.0);
        let b = compute_b(&ResolventPoint::new(lambda, mu), &TangentialFrequency::new(vec![a])).unwrap();
        let (rt, rn) = (complex_unit_box(&mut rng), complex_unit_box(&mut rng));
        let s = solve_lopatinski(a, b, mu, rt, rn).unwrap();

        let s2 = b * b + a * a;
        let m = Matrix2::new(C64::from(2.0 * a * a), s2, s2, 2.0 * a * b);
        let rhs = Vector2::new(rt / mu, a * rn / mu);
        let back = m * Vector2::new(s.alpha_n, s.beta_n) - rhs;
        let scale = m.norm() * (s.alpha_n.norm() + s.beta_n.norm()) + rhs.norm();
        assert!(back.norm() <= 1e-12 * scale, "back-substitution {:e}", back.norm() / scale);

        let generic = m.try_inverse().unwrap() * rhs;
        let gsc = generic.norm();
        assert!((generic[0] - s.alpha_n).norm() <= 1e-12 * gsc * m.norm() * m.try_inverse().unwrap().norm());
        assert!((generic[1] - s.beta_n).norm() <= 1e-12 * gsc * m.norm() * m.try_inverse().unwrap().norm());
        let omega = mu * (b * b - a * a) * s.alpha_n / a;
        assert!((omega - s.omega).norm() <= 1e-10 * omega.norm().max(s.omega.norm()).max(1e-300));
    }
}

#[test]
fn lopatinski_omega_is_continuous_at_zero_frequency() {
    let b = C64::new(1.1, 0.3);
    let at0 = solve_lopatinski(0.0, b, 1.0, C64::new(0.2, 0.0), C64::new(0.5, -0.1)).unwrap();
    let near = solve_lopatinski(1e-7, b, 1.0, C64::new(0.2, 0.0), C64::new(0.5, -0.1)).unwrap();
    assert!((at0.omega - near.omega).norm() < 1e-5);
}

#[test]
fn neumann_zero_data_gives_zero_profile() {
    let p = solve_neumann_model(&ResolventPoint::new(C64::new(1.0, 1.0), 1.0), &TangentialFrequency::new(vec![1.0, 0.0]), &[zero(); 3]).unwrap();
    assert!(p.coef_exp_a.iter().chain(&p.coef_exp_b).chain(&p.coef_m).all(|c| *c == zero()));
}

#[test]
fn neumann_worked_example() {
    let point = ResolventPoint::new(C64::new(1.0, 1.0), 1.0);
    let freq = TangentialFrequency::new(vec![1.0, 0.0]);
    let h = complex_vec(&mut stream(3, 0), 3);
    let p = solve_neumann_model(&point, &freq, &h).unwrap();
    let g: Vec<C64> = h.iter().map(|v| -v).collect();
    let r = p.residuals(&xs_for(p.b), &g);
    assert!(r.max() <= 1e-9, "{r:?}");
    assert!(r.boundary_tangential <= 1e-10 && r.boundary_normal <= 1e-10);
}

#[test]
fn neumann_sweep_over_the_sector() {
    let mut rng = stream(42, 7);
    for _ in 0..100 {
        let point = ResolventPoint::new(sector_point(&mut rng, PI / 4.0, 1.0, 1e4), uniform(&mut rng, 0.5, 2.0));
        let freq = TangentialFrequency::new(vec![uniform(&mut rng, -5.0, 5.0), uniform(&mut rng, -5.0, 5.0)]);
        let h = complex_vec(&mut rng, 3);
        let p = solve_neumann_model(&point, &freq, &h).unwrap();
        let g: Vec<C64> = h.iter().map(|v| -v).collect();
        let r = p.residuals(&xs_for(p.b), &g);
        assert!(r.momentum <= 1e-9 && r.divergence <= 1e-9, "{r:?}");
        assert!(r.boundary_tangential <= 1e-10 && r.boundary_normal <= 1e-10, "{r:?}");
        let [ka, kb, km] = p.divergence_coefficients();
        let scale: f64 = p.coef_exp_a.iter().chain(&p.coef_exp_b).chain(&p.coef_m).map(|c| c.norm()).sum::<f64>() * (freq.a + p.b.norm());
        assert!(ka.norm() + kb.norm() + km.norm() <= 1e-12 * scale);
    }
}

#[test]
fn neumann_profiles_are_linear_in_the_datum() {
    let point = ResolventPoint::new(C64::new(-2.0, 5.0), 1.4);
    let freq = TangentialFrequency::new(vec![0.7, -1.9]);
    let mut rng = stream(8, 8);
    let (h1, h2) = (complex_vec(&mut rng, 3), complex_vec(&mut rng, 3));
    let (al, be) = (C64::new(0.3, -1.2), C64::new(2.0, 0.5));
    let hc: Vec<C64> = h1.iter().zip(&h2).map(|(x, y)| al * x + be * y).collect();
    let (p1, p2, pc) = (
        solve_neumann_model(&point, &freq, &h1).unwrap(),
        solve_neumann_model(&point, &freq, &h2).unwrap(),
        solve_neumann_model(&point, &freq, &hc).unwrap(),
    );
    let pairs = [(&p1.coef_exp_a, &p2.coef_exp_a, &pc.coef_exp_a), (&p1.coef_exp_b, &p2.coef_exp_b, &pc.coef_exp_b), (&p1.coef_m, &p2.coef_m, &pc.coef_m)];
    for (c1, c2, cc) in pairs {
        for k in 0..cc.len() {
            let lin = al * c1[k] + be * c2[k];
            assert!((lin - cc[k]).norm() <= 1e-12 * (1.0 + cc[k].norm()));
        }
    }
}

#[test]
fn neumann_coefficients_are_continuous_along_a_sector_arc() {
    let freq = TangentialFrequency::new(vec![0.9, 0.4]);
    let h = complex_vec(&mut stream(9, 9), 3);
    let arc = |n: usize| -> f64 {
        let theta = 3.0 * PI / 4.0;
        let coefs: Vec<Vec<C64>> = (0..=n)
            .map(|k| {
                let t = -theta + 2.0 * theta * k as f64 / n as f64;
                let p = solve_neumann_model(&ResolventPoint::new(C64::from_polar(4.0, t), 1.0), &freq, &h).unwrap();
                p.coef_exp_a.iter().chain(&p.coef_exp_b).chain(&p.coef_m).cloned().collect()
            })
            .collect();
        coefs
            .windows(2)
            .map(|w| w[0].iter().zip(&w[1]).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max))
            .fold(0.0, f64::max)
    };
    let (coarse, fine) = (arc(200), arc(400));
    // No branch jump: the largest step halves with the arc spacing.
    assert!(fine < 0.6 * coarse, "{coarse} -> {fine}");
}

#[test]
fn tension_zero_datum() {
    let point = ResolventPoint::new(C64::new(5.0, 0.0), 1.0).with_sigma(1.0);
    let p = solve_surface_tension_model(&point, &TangentialFrequency::new(vec![1.0, 1.0]), zero()).unwrap();
    assert_eq!(p.h_hat, Some(zero()));
    assert!(p.velocity(0.5).iter().all(|v| *v == zero()));
}

#[test]
fn tension_worked_example() {
    let point = ResolventPoint::new(C64::new(5.0, 0.0), 1.0).with_sigma(1.0).with_a_kappa(vec![0.0, 0.0]);
    let freq = TangentialFrequency::new(vec![1.0, 1.0]);
    let d_hat = C64::new(1.0, 0.0);
    let p = solve_surface_tension_model(&point, &freq, d_hat).unwrap();
    let r = p.tension_residuals(&xs_for(p.b), d_hat);
    assert!(r.max() <= 1e-9, "{r:?}");
    let h = p.h_hat.unwrap();
    let e = compute_e_kappa(&point, &freq).unwrap();
    assert_eq!(h, point.mu * compute_d(freq.a, p.b) * d_hat / e);
    // Eliminating ĥ: the kinematic row reproduces d̂.
    let back = point.lambda * h + p.velocity(0.0)[2];
    assert!((back - d_hat).norm() <= 1e-12);
}

#[test]
fn tension_sweep_with_drift() {
    let mut rng = stream(77, 3);
    for _ in 0..100 {
        let point = ResolventPoint::new(sector_point(&mut rng, PI / 4.0, 1.0, 1e4), uniform(&mut rng, 0.5, 2.0))
            .with_sigma(uniform(&mut rng, 0.1, 2.0))
            .with_a_kappa(vec![uniform(&mut rng, -1.0, 1.0), uniform(&mut rng, -1.0, 1.0)]);
        let freq = TangentialFrequency::new(vec![uniform(&mut rng, -5.0, 5.0), uniform(&mut rng, -5.0, 5.0)]);
        let d_hat = complex_unit_box(&mut rng);
        let p = solve_surface_tension_model(&point, &freq, d_hat).unwrap();
        let r = p.tension_residuals(&xs_for(p.b), d_hat);
        assert!(r.max() <= 1e-9, "{r:?}");
    }
}

#[test]
fn tension_reduces_to_zero_drift_continuously() {
    let freq = TangentialFrequency::new(vec![1.3, -0.4]);
    let base = ResolventPoint::new(C64::new(2.0, 2.0), 1.0).with_sigma(1.0);
    let h0 = solve_surface_tension_model(&base, &freq, C64::new(1.0, 0.0)).unwrap().h_hat.unwrap();
    let gaps: Vec<f64> = [1e-2, 1e-4, 1e-6]
        .iter()
        .map(|&k| {
            let p = base.clone().with_a_kappa(vec![k, k]);
            (solve_surface_tension_model(&p, &freq, C64::new(1.0, 0.0)).unwrap().h_hat.unwrap() - h0).norm()
        })
        .collect();
    assert!(gaps[1] < 1.1e-2 * gaps[0] && gaps[2] < 1.1e-2 * gaps[1], "{gaps:?}");
}

#[test]
fn wholespace_solenoidal_data() {
    let point = ResolventPoint::new(C64::new(2.0, 3.0), 1.7);
    let xi = [0.6, -1.1, 0.4];
    // f̂(ξ) = (ξ₂, −ξ₁, 0) c is orthogonal to ξ for any complex c.
    let c = C64::new(0.8, -0.3);
    let sol = move |x: &[f64]| vec![c * x[1], -c * x[0], C64::new(0.0, 0.0)];
    let s = solve_wholespace(&point, sol);
    let u = s.u_hat(&xi).unwrap();
    let r2: f64 = xi.iter().map(|x| x * x).sum();
    for (k, fk) in sol(&xi).iter().enumerate() {
        assert!((u[k] - fk / (point.lambda + point.mu * r2)).norm() < 1e-15);
    }
    assert_eq!(s.g_hat(&xi).unwrap(), zero());
}

#[test]
fn wholespace_unit_viscosity_drops_the_correction() {
    let point = ResolventPoint::new(C64::new(2.0, 3.0), 1.0);
    let f = |_: &[f64]| vec![C64::new(1.0, 0.5), C64::new(-0.3, 0.0), C64::new(0.2, 0.9)];
    let s = solve_wholespace(&point, f);
    let xi = [0.3, 0.7, -1.5];
    let r2: f64 = xi.iter().map(|x| x * x).sum();
    let u = s.u_hat(&xi).unwrap();
    for (k, fk) in f(&xi).iter().enumerate() {
        assert!((u[k] - fk / (point.lambda + r2)).norm() < 1e-15);
    }
}

#[test]
fn wholespace_random_data_residuals() {
    let point = ResolventPoint::new(C64::new(2.0, 3.0), 1.7);
    let mut rng = stream(100, 1);
    let coefs = complex_vec(&mut rng, 9);
    let f = move |x: &[f64]| (0..3).map(|j| coefs[3 * j] + coefs[3 * j + 1] * x[j] + coefs[3 * j + 2] * x[(j + 1) % 3] * x[j]).collect::<Vec<C64>>();
    let s = solve_wholespace(&point, f);
    for _ in 0..1000 {
        let xi: Vec<f64> = (0..3).map(|_| uniform(&mut rng, -20.0, 20.0)).collect();
        assert!(s.momentum_residual(&xi).unwrap() <= 1e-10);
        assert!(s.divergence_residual(&xi).unwrap() <= 1e-10);
    }
    assert_eq!(s.u_hat(&[0.0, 0.0, 0.0]).unwrap_err(), SolveError::ZeroFrequency);
}

#[test]
fn weak_laplace_gradient_solenoidal_and_random() {
    let phi = |x: &[f64]| C64::new((-x[0] * x[0]).exp(), x[1]);
    let grad = move |x: &[f64]| x.iter().map(|&k| C64::new(0.0, k) * phi(x)).collect::<Vec<C64>>();
    let w = solve_weak_laplace_wholespace(grad);
    let xi = [0.4, -1.3];
    assert!((w.eval(&xi).unwrap() - phi(&xi)).norm() < 1e-15);

    let sol = |x: &[f64]| vec![C64::new(x[1], 0.0), C64::new(-x[0], 0.0)];
    assert_eq!(solve_weak_laplace_wholespace(sol).eval(&xi).unwrap(), zero());

    let mut rng = stream(5, 5);
    let c = complex_vec(&mut rng, 3);
    let rand_f = move |x: &[f64]| vec![c[0] + c[1] * x[1], c[2] * x[0] * x[0]];
    let w = solve_weak_laplace_wholespace(rand_f);
    for _ in 0..200 {
        let xi = [uniform(&mut rng, -5.0, 5.0), uniform(&mut rng, -5.0, 5.0)];
        assert!(w.residual(&xi).unwrap() <= 1e-12);
    }
}

#[test]
fn weak_dirichlet_gradient_of_odd_potential() {
    // φ = x₂ e^{−|x|²/σ²}: odd in x_N, and ∇φ has vanishing tangential trace.
    let s2 = 0.3;
    let phi = move |x: &[f64]| x[1] * (-(x[0] * x[0] + x[1] * x[1]) / s2).exp();
    let f = move |x: &[f64]| {
        let e = (-(x[0] * x[0] + x[1] * x[1]) / s2).exp();
        vec![-2.0 * x[0] * x[1] / s2 * e, (1.0 - 2.0 * x[1] * x[1] / s2) * e]
    };
    let sol = solve_weak_dirichlet_halfspace(f, 2, 1.0, 64).unwrap();
    assert!(sol.max_error(phi) < 1e-10, "{}", sol.max_error(phi));
    assert!(sol.boundary_max() <= 1e-12);
}

#[test]
fn weak_dirichlet_gaussian_bump_converges_at_second_order() {
    // Bump centred off the boundary, scalar in the normal component only.
    let s2 = 0.3;
    let c = 0.5;
    let f = move |x: &[f64]| {
        let r2 = x[0] * x[0] + (x[1] - c) * (x[1] - c);
        let rm = x[0] * x[0] + (x[1] + c) * (x[1] + c);
        vec![0.0, (-r2 / s2).exp() + (-rm / s2).exp()]
    };
    let div = move |x: &[f64]| {
        let r2 = x[0] * x[0] + (x[1] - c) * (x[1] - c);
        let rm = x[0] * x[0] + (x[1] + c) * (x[1] + c);
        -2.0 * (x[1] - c) / s2 * (-r2 / s2).exp() - 2.0 * (x[1] + c) / s2 * (-rm / s2).exp()
    };
    let res: Vec<f64> = [32, 64, 128]
        .iter()
        .map(|&n| solve_weak_dirichlet_halfspace(f, 2, 1.0, n).unwrap().laplacian_residual(div))
        .collect();
    let o1 = (res[0] / res[1]).log2();
    let o2 = (res[1] / res[2]).log2();
    assert!(o1 >= 1.9 && o2 >= 1.9, "{res:?}");
}

#[test]
fn pressure_auxiliary_cases() {
    let zero_rho = solve_pressure_auxiliary(&ResolventPoint::new(C64::new(1.0, 0.0), 1.0), &TangentialFrequency::new(vec![0.0]), zero()).unwrap();
    assert_eq!(zero_rho.eval(0.7), zero());
    let rho = C64::new(0.3, -2.0);
    let aux = solve_pressure_auxiliary(&ResolventPoint::new(C64::new(1.0, 0.0), 1.0), &TangentialFrequency::new(vec![0.0]), rho).unwrap();
    for x in [0.0, 0.5, 3.0] {
        assert!((aux.eval(x) - (-x).exp() * rho).norm() < 1e-15);
    }
    let aux = solve_pressure_auxiliary(&ResolventPoint::new(C64::new(-3.0, 4.0), 1.0), &TangentialFrequency::new(vec![1.5, 0.2]), rho).unwrap();
    assert_eq!(aux.eval(0.0), rho);
    for x in chebyshev_points(16, 0.0, 5.0) {
        assert!(aux.residual(x) <= 1e-12);
    }
}

#[test]
fn volevich_resolvent_kernel_closed_form() {
    let point = ResolventPoint::new(C64::new(3.0, 2.0), 1.0);
    let xis = vec![vec![0.5, 0.0], vec![2.0, 1.0]];
    let xs = chebyshev_points(9, 0.0, 3.0);
    let m = |_: C64, xi: &[f64]| C64::new(1.0 + xi[0], 0.0);
    let g = |xi: &[f64], y: f64| {
        let b = compute_b(&point, &TangentialFrequency::new(xi.to_vec())).unwrap();
        (-b * y).exp()
    };
    let (out, rep) = apply_volevich_operator(VolevichKernel::Resolvent, &point, &xis, &xs, m, g).unwrap();
    assert_eq!(rep.truncation.len(), 2);
    for (i, xi) in xis.iter().enumerate() {
        let b = compute_b(&point, &TangentialFrequency::new(xi.clone())).unwrap();
        for (k, &x) in xs.iter().enumerate() {
            let expect = m(point.lambda, xi) * point.lambda.sqrt() * (-b * x).exp() / (2.0 * b);
            assert!((out[i][k] - expect).norm() <= 1e-12 * expect.norm().max(1e-300) + 1e-15);
        }
    }
}

#[test]
fn volevich_l3_against_antiderivative() {
    let point = ResolventPoint::new(C64::new(-1.0, 6.0), 1.3);
    let xis = vec![vec![0.7, 0.0], vec![1.5, -2.0]];
    let xs = chebyshev_points(9, 0.0, 2.0);
    let g = |xi: &[f64], y: f64| C64::new((-TangentialFrequency::new(xi.to_vec()).a * y).exp(), 0.0);
    let (out, _) = apply_volevich_operator(VolevichKernel::L3, &point, &xis, &xs, |_, _| C64::new(1.0, 0.0), g).unwrap();
    for (i, xi) in xis.iter().enumerate() {
        let f = TangentialFrequency::new(xi.clone());
        let (a, b) = (f.a, compute_b(&point, &f).unwrap());
        for (k, &x) in xs.iter().enumerate() {
            let expect = a * a / (b - a) * ((-b * x).exp() / (a + b) - (-a * x).exp() / (2.0 * a));
            assert!((out[i][k] - expect).norm() <= 1e-10 * expect.norm(), "{} vs {}", out[i][k], expect);
        }
    }
}

#[test]
fn volevich_zero_density_and_empty_grid() {
    let point = ResolventPoint::new(C64::new(1.0, 1.0), 1.0);
    for kind in [VolevichKernel::L1, VolevichKernel::L2, VolevichKernel::L4, VolevichKernel::L6, VolevichKernel::L7] {
        let (out, _) = apply_volevich_operator(kind, &point, &[vec![1.0]], &[0.0, 1.0], |_, _| C64::new(1.0, 0.0), |_, _| zero()).unwrap();
        assert!(out[0].iter().all(|v| *v == zero()));
    }
    let e = apply_volevich_operator(VolevichKernel::L1, &point, &[], &[0.0], |_, _| C64::new(1.0, 0.0), |_, _| zero());
    assert!(matches!(e, Err(SolveError::EmptyGrid)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn neumann_residuals_hold_for_random_admissible_inputs(
        seed in 0u64..1_000_000,
        r in 0.0f64..9.0,
        t in -0.999f64..0.999,
        x1 in -20.0f64..20.0,
        x2 in -20.0f64..20.0,
    ) {
        let point = ResolventPoint::new(C64::from_polar(r.exp(), t * 3.0 * PI / 4.0), 1.0);
        let freq = TangentialFrequency::new(vec![x1, x2]);
        let h = complex_vec(&mut stream(seed, 0), 3);
        let p = solve_neumann_model(&point, &freq, &h).unwrap();
        let g: Vec<C64> = h.iter().map(|v| -v).collect();
        prop_assert!(p.residuals(&xs_for(p.b), &g).max() <= 1e-9);
    }
}
