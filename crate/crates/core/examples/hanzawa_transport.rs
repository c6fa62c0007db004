//! Hanzawa-type displacement y ↦ y + Ψ(y, t): the V0/J algebra, the
//! transformed divergence identity, Reynolds transport and the area
//! derivative of a moving sphere.

use fbstokes::geometry::{circle_param_rule, sphere_param_rule};
use fbstokes::transforms::*;

fn main() -> Result<(), TransformError> {
    let psi = DisplacementField::new(VectorField::trigonometric(1, 3, 0.1), 0.6);
    let y = [0.2, -0.1, 0.3];
    let state = psi.state(&y, 0.5)?;
    println!("J = {:.12}, |(I + grad Psi)(I + V0) - I| = {:.2e}", state.j, state.inverse_residual());
    let g = psi.checked_grad(&y, 0.5)?;
    println!("Neumann-series V0 vs exact: {:.2e}", (v0_neumann(&g) - &state.v0).abs().max());

    let u = VectorField::trigonometric(2, 3, 0.5);
    println!("divergence identity, finite-difference step vs residual:");
    let mut rows = Vec::new();
    for h in [4e-2, 2e-2, 1e-2, 5e-3] {
        let forms = transformed_divergence(&u, &psi, &y, 0.5, h)?;
        let gap = (forms.form_a - forms.form_b).abs();
        println!("  h = {h:<6} {gap:.3e}");
        rows.push((h, gap));
    }
    println!("  fitted order {:.3}", fitted_order(&rows));

    let w = VectorField::trigonometric(3, 3, 0.5);
    let rec = reynolds_transport_check(&w, &y, 0.4, &[4e-2, 2e-2, 1e-2, 5e-3])?;
    match rec.order {
        Some(o) => println!("Reynolds transport order {o:.3}, Jacobi residual {:.2e}", rec.jacobi_residual),
        None => println!("Reynolds transport exact to round-off"),
    }

    let a3 = area_derivative_check(moving_sphere(2.0, 0.3, 3), &sphere_param_rule(12), 0.0, 1e-4)?;
    let a2 = area_derivative_check(moving_sphere(1.5, 0.3, 2), &circle_param_rule(64), 0.0, 1e-4)?;
    println!("d|Gamma|/dt: sphere {:.10} vs {:.10}; circle {:.10} vs {:.10}", a3.lhs, a3.rhs, a2.lhs, a2.rhs);
    Ok(())
}
