use fbstokes::geometry::*;
use fbstokes::rng;
use fbstokes::transforms::*;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::Rng;

fn random_matrix(seed: u64, n: usize, norm: f64) -> DMatrix<f64> {
    let mut r = rng::stream(seed, 7);
    let m = DMatrix::from_fn(n, n, |_, _| r.gen_range(-1.0..1.0));
    let s = m.clone().svd(false, false).singular_values.max();
    m * (norm / s)
}

fn trig_field(seed: u64, dim: usize, amp: f64) -> VectorField {
    VectorField::trigonometric(seed, dim, amp)
}

#[test]
fn v0_j_closed_forms() {
    let s = compute_v0_j(&DMatrix::zeros(3, 3)).unwrap();
    assert_eq!(s.v0, DMatrix::zeros(3, 3));
    assert_eq!(s.j, 1.0);
    for a in [-0.3, 0.2, 0.45] {
        for n in [2, 3] {
            let s = compute_v0_j(&DMatrix::from_diagonal_element(n, n, a)).unwrap();
            assert!((s.v0[(0, 0)] + a / (1.0 + a)).abs() < 1e-15);
            assert!((s.j - (1.0f64 + a).powi(n as i32)).abs() < 1e-14);
        }
    }
    assert!(matches!(compute_v0_j(&DMatrix::from_diagonal_element(2, 2, -1.0)), Err(TransformError::NearSingular(_))));
}

#[test]
fn neumann_series_matches_inverse() {
    for seed in 0..50 {
        let k = random_matrix(seed, 3, 0.3);
        let s = compute_v0_j(&k).unwrap();
        assert!(s.inverse_residual() < 1e-12);
        assert!((v0_neumann(&k) - &s.v0).abs().max() < 1e-10);
    }
}

#[test]
fn hanzawa_identity_translation_and_injectivity() {
    let zero = DisplacementField::zero(3);
    let y = [0.3, -0.2, 0.5];
    let x = hanzawa_map(&zero, &[0.0; 3], &y, 0.0).unwrap();
    assert_eq!(x.as_slice(), &y);
    let pairs: Vec<(Vec<f64>, Vec<f64>)> = vec![(vec![0.1, 0.2, 0.3], vec![-0.4, 0.5, 0.0]), (vec![0.0; 3], vec![0.3, 0.3, 0.3])];
    let w = injectivity_witness(&zero, &[1.0, -2.0, 0.5], &pairs, 0.0).unwrap();
    assert!((w.min_ratio - 1.0).abs() < 1e-14);

    // radial Ψ = ε ω(y) y with ω = ρ(ŷ)|y|/R², ρ = Y_{2,0}
    let eps = 0.05;
    let rho = SphericalGraph::from_expansion(0.0, SphericalExpansion::new(vec![(2, 0, eps)]));
    let psi = ball_displacement(rho, 1.0, 0.3);
    let mut r = rng::stream(3, 1);
    let pairs: Vec<(Vec<f64>, Vec<f64>)> = (0..200)
        .map(|_| {
            let mut p = || {
                let v: Vec<f64> = (0..3).map(|_| r.gen_range(-0.55..0.55)).collect();
                v
            };
            (p(), p())
        })
        .collect();
    let w = injectivity_witness(&psi, &[0.0; 3], &pairs, 0.0).unwrap();
    assert!(w.max_grad_norm <= 0.3);
    assert!(w.holds(), "{w:?}");

    let big = DisplacementField::new(VectorField::affine(DMatrix::from_diagonal_element(3, 3, 0.9), DVector::zeros(3)), 0.5);
    assert!(matches!(hanzawa_map(&big, &[0.0; 3], &y, 0.0), Err(TransformError::DeltaViolation { .. })));
}

#[test]
fn divergence_forms_exact_for_affine_and_linear() {
    let k = random_matrix(5, 3, 0.4);
    let psi = DisplacementField::new(VectorField::affine(k, DVector::from_vec(vec![0.1, 0.0, -0.2])), 0.5);
    let u = VectorField::affine(random_matrix(6, 3, 1.0), DVector::from_vec(vec![0.3, 0.2, 0.1]));
    let y = [0.2, -0.1, 0.4];
    let f = transformed_divergence(&u, &psi, &y, 0.0, 1e-2).unwrap();
    assert!((f.form_a - f.form_b).abs() < 1e-12, "{f:?}");
    let z = transformed_divergence(&u, &DisplacementField::zero(3), &y, 0.0, 1e-2).unwrap();
    assert!((z.form_a - u.divergence(&y, 0.0)).abs() < 1e-15);
    assert!((z.form_b - u.divergence(&y, 0.0)).abs() < 1e-12);
}

#[test]
fn divergence_identity_at_second_order() {
    let psi = DisplacementField::new(trig_field(1, 3, 0.1), 0.6);
    let u = trig_field(2, 3, 1.0);
    let y = [0.3, 0.1, -0.2];
    let rows: Vec<(f64, f64)> = [4e-2, 2e-2, 1e-2, 5e-3]
        .iter()
        .map(|&h| {
            let f = transformed_divergence(&u, &psi, &y, 0.0, h).unwrap();
            (h, (f.form_a - f.form_b).abs())
        })
        .collect();
    assert!(fitted_order(&rows) >= 1.9, "{rows:?}");
    let ball = ball_displacement(SphericalGraph::sphere(0.1), 1.0, 0.5);
    assert!(matches!(
        transformed_divergence(&u, &ball, &[0.0, 0.0, 0.999], 0.0, 1e-2),
        Err(TransformError::StencilOutOfDomain { .. })
    ));
}

#[test]
fn pushforward_normal_cases() {
    let n = DVector::from_vec(vec![0.0, 0.0, 1.0]);
    let id = compute_v0_j(&DMatrix::zeros(3, 3)).unwrap();
    assert_eq!(pushforward_normal(&id, &n).unwrap(), n);
    // shear x_1 += s y_3 (so ∂_3Ψ_1 = s): the surface y_3 = 0 stays flat but the map tilts vertical lines
    let s = 0.3;
    let mut k = DMatrix::zeros(3, 3);
    k[(2, 0)] = s;
    let nt = pushforward_normal(&compute_v0_j(&k).unwrap(), &n).unwrap();
    assert!((nt.norm() - 1.0).abs() < 1e-14);
    assert!((nt - &n).norm() < 1e-15);
    // shear x_3 += s y_1 (∂_1Ψ_3 = s) tilts the plane: normal ∝ (−s, 0, 1)
    let mut k = DMatrix::zeros(3, 3);
    k[(0, 2)] = s;
    let nt = pushforward_normal(&compute_v0_j(&k).unwrap(), &n).unwrap();
    let want = DVector::from_vec(vec![-s, 0.0, 1.0]) / (1.0 + s * s).sqrt();
    assert!((nt - want).norm() < 1e-14);
}

#[test]
fn pushforward_normal_linearizes_on_sphere() {
    let sphere = sphere_patch(1.0, 3).unwrap();
    let (t, p) = (0.9, 0.4);
    let y = sphere.phi(&[t, p]);
    let n = unit_normal(&sphere, &[t, p]).unwrap();
    let h = SphericalExpansion::new(vec![(2, 1, 1.0), (3, 0, 0.5)]);
    let hj = h.eval(t, p);
    let rows: Vec<(f64, f64)> = [1e-1, 1e-2, 1e-3, 1e-4]
        .iter()
        .map(|&eps| {
            let rho = SphericalGraph::from_expansion(0.0, SphericalExpansion::new(h.terms.iter().map(|&(l, m, c)| (l, m, eps * c)).collect()));
            let psi = ball_displacement(rho, 1.0, 0.9);
            let nt = pushforward_normal(&psi.state(y.as_slice(), 0.0).unwrap(), &n).unwrap();
            let lin = linearized_normal(&sphere, &[t, p], &[eps * hj.t, eps * hj.p]).unwrap();
            (eps, (nt - lin).norm())
        })
        .collect();
    assert!(fitted_order(&rows) >= 1.9, "{rows:?}");
}

#[test]
fn reynolds_transport() {
    let y = [0.2, 0.5, -0.1];
    let c = VectorField::affine(DMatrix::zeros(3, 3), DVector::from_vec(vec![1.0, 2.0, 3.0]));
    let rec = reynolds_transport_check(&c, &y, 0.3, &[1e-2, 1e-3]).unwrap();
    assert!(rec.exact() && rec.rows.iter().all(|r| r.1 == 0.0));

    let dil = VectorField::affine(DMatrix::identity(3, 3), DVector::zeros(3));
    let t = 0.5;
    let rec = reynolds_transport_check(&dil, &y, t, &[1e-1, 5e-2, 2.5e-2]).unwrap();
    assert!(rec.jacobi_residual < 1e-13);
    // central difference of (1+t)³ misses by exactly Δt²
    for (dt, e) in &rec.rows {
        assert!((e - dt * dt).abs() < 1e-12);
    }
    assert!(rec.order.unwrap() >= 1.9);

    let w = trig_field(9, 3, 0.5);
    let rec = reynolds_transport_check(&w, &y, 0.4, &[4e-2, 2e-2, 1e-2, 5e-3]).unwrap();
    assert!(rec.order.unwrap() >= 1.9, "{rec:?}");
    assert!(rec.jacobi_residual < 1e-12);
}

#[test]
fn area_derivative_on_spheres() {
    let rule = sphere_param_rule(12);
    let grow = area_derivative_check(moving_sphere(2.0, 1.0, 3), &rule, 0.0, 1e-3).unwrap();
    let want = 16.0 * std::f64::consts::PI;
    assert!((grow.lhs - want).abs() < 1e-8 && (grow.rhs - want).abs() < 1e-8, "{grow:?}");
    let shrink = area_derivative_check(moving_sphere(2.0, -1.0, 3), &rule, 0.0, 1e-3).unwrap();
    assert!((shrink.lhs + want).abs() < 1e-8 && shrink.residual < 1e-8);
    let stat = area_derivative_check(moving_sphere(1.0, 0.0, 3), &rule, 0.0, 1e-3).unwrap();
    assert!(stat.lhs.abs() < 1e-12 && stat.rhs.abs() < 1e-12);
    let circ = area_derivative_check(moving_sphere(1.5, 1.0, 2), &circle_param_rule(64), 0.0, 1e-3).unwrap();
    assert!((circ.lhs - 2.0 * std::f64::consts::PI).abs() < 1e-8 && circ.residual < 1e-8);
}

#[test]
fn partial_lagrange_cases() {
    let times: Vec<f64> = (0..=10).map(|k| k as f64 * 0.01).collect();
    let zero = VectorField::zero(3);
    let y = [0.3, 0.2, 0.1];
    assert_eq!(partial_lagrange_map(&zero, 1.0, &times, 0.5, &y).unwrap().as_slice(), &y);
    let u = trig_field(4, 3, 1.0);
    let far = [2.5, 0.1, 0.0];
    assert_eq!(partial_lagrange_map(&u, 1.0, &times, 0.5, &far).unwrap().as_slice(), &far);
    let x = partial_lagrange_map(&u, 1.0, &times, 0.5, &y).unwrap();
    let want = DVector::from_column_slice(&y) + u.value(&y, 0.0) * 0.1;
    assert!((x - want).norm() < 1e-14);
    let long: Vec<f64> = (0..=10).map(|k| k as f64).collect();
    assert!(matches!(partial_lagrange_map(&u, 1.0, &long, 0.5, &y), Err(TransformError::DeltaViolation { .. })));
}

proptest! {
    #[test]
    fn inverse_identity_holds(seed in 0u64..10_000, norm in 0.0f64..0.5) {
        let k = random_matrix(seed, 3, norm);
        let s = compute_v0_j(&k).unwrap();
        prop_assert!(s.inverse_residual() < 1e-12);
        prop_assert!(s.j > 0.0);
    }
}
