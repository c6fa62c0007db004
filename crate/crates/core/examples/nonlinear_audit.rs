//! Nonlinear terms of the transformed system on a perturbed ball: they vanish
//! for the undisplaced ball and leave quadratic remainders once linearized.

use fbstokes::geometry::{SphericalExpansion, SphericalGraph};
use fbstokes::nonlinear::*;
use fbstokes::transforms::{ball_displacement, fitted_order, VectorField};
use nalgebra::DVector;

fn height(eps: f64) -> SphericalGraph {
    SphericalGraph::from_expansion(0.0, SphericalExpansion::new(vec![(2, 1, eps), (3, -2, 0.5 * eps)]))
}

fn main() -> Result<(), NonlinearError> {
    let u = VectorField::trigonometric(7, 3, 1.0);
    let (theta, phi) = (1.1, 0.7);

    let h = height(0.0);
    let state = FlowState::new(u.clone(), ball_displacement(h.clone(), 1.0, 0.9), 1.3);
    let b = sphere_boundary(&h, 1.0, theta, phi)?;
    let all = assemble_all(&state, &b, 0.0, 2.0, 0.0, &DVector::zeros(3))?;
    println!("undisplaced ball: |g| = {:.1e}, |gvec| = {:.1e}, |h'| = {:.1e}, |h_N| = {:.1e}, |d| = {:.1e}", all.g.abs(), all.gvec.amax(), all.hprime.amax(), all.hn.abs(), all.d.abs());
    println!("  f = {:.6?} (only the convective term survives)", all.f.as_slice());

    println!("   eps      |h' - lin|     |n_t - lin|    |H remainder|");
    let mut rows = [Vec::new(), Vec::new(), Vec::new()];
    for eps in [1e-1, 1e-2, 1e-3, 1e-4] {
        let h = height(eps);
        let state = FlowState::new(u.clone(), ball_displacement(h.clone(), 1.0, 0.9), 1.3);
        let b = sphere_boundary(&h, 1.0, theta, phi)?;
        let jet = state.jet(b.y.as_slice(), 0.0)?;
        let errs = [
            (assemble_hprime(&jet, &b)? - assemble_hprime_linear(&jet, &b)?).norm(),
            normal_remainder(&transported_normal(&jet, &b)?, &b).norm(),
            curvature_remainder(&b).abs(),
        ];
        println!("  {eps:<7} {:>13.4e} {:>14.4e} {:>14.4e}", errs[0], errs[1], errs[2]);
        for (r, e) in rows.iter_mut().zip(errs) {
            r.push((eps, e));
        }
    }
    println!("  slopes {:.3} {:.3} {:.3}", fitted_order(&rows[0]), fitted_order(&rows[1]), fitted_order(&rows[2]));
    Ok(())
}
