//! Neumann and surface-tension model problems at one (λ, ξ′): coefficients,
//! a velocity profile in x_N and the residual of every equation.

use fbstokes::halfspace::*;
use fbstokes::quadrature::chebyshev_points;
use fbstokes::symbols::*;
use num_complex::Complex64 as C64;

fn main() -> Result<(), SolveError> {
    let point = ResolventPoint::new(C64::new(2.0, 3.0), 1.0);
    let freq = TangentialFrequency::new(vec![1.0, -0.5]);

    let h = [C64::new(1.0, 0.0), C64::new(0.0, 0.5), C64::new(-0.3, 0.2)];
    let p = solve_neumann_model(&point, &freq, &h)?;
    println!("Neumann: B = {:.6}", p.b);
    println!("  x_N      |u_1|        |u_2|        |u_3|        |pi|");
    for x in [0.0, 0.25, 0.5, 1.0, 2.0, 4.0] {
        let u = p.velocity(x);
        println!("  {x:<6} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e}", u[0].norm(), u[1].norm(), u[2].norm(), p.pressure(x).norm());
    }
    // Residuals take the boundary datum with the sign of the stress condition.
    let g: Vec<C64> = h.iter().map(|v| -v).collect();
    let xs = chebyshev_points(32, 0.0, 10.0 / p.b.re);
    println!("  residuals {:?}", p.residuals(&xs, &g));

    let point = point.with_sigma(0.8).with_a_kappa(vec![0.3, 0.1]);
    let d_hat = C64::new(1.0, -1.0);
    let t = solve_surface_tension_model(&point, &freq, d_hat)?;
    let h_hat = t.h_hat.expect("the tension model returns the height");
    println!("Tension: E_kappa = {:.6}, h_hat = {:.6}", compute_e_kappa(&point, &freq).unwrap(), h_hat);
    println!("  residuals {:?}", t.tension_residuals(&xs, d_hat));
    println!("  kinematic row: lambda h + drift + u_N(0) - d = {:.2e}", {
        let drift = C64::new(0.0, 1.0) * (0.3 * freq.xi_prime[0] + 0.1 * freq.xi_prime[1]) * h_hat;
        (point.lambda * h_hat + drift + t.velocity(0.0)[2] - d_hat).norm()
    });
    Ok(())
}
