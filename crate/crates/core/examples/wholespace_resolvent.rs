//! Whole-space resolvent in Fourier variables for a polynomial-times-Gaussian
//! right-hand side, with the weak Laplace problem that removes its divergence.

use fbstokes::halfspace::*;
use fbstokes::rng::{stream, uniform};
use fbstokes::symbols::ResolventPoint;
use num_complex::Complex64 as C64;

fn main() -> Result<(), SolveError> {
    let point = ResolventPoint::new(C64::new(2.0, 3.0), 1.7);
    let f_hat = |xi: &[f64]| {
        let g = (-0.5 * xi.iter().map(|v| v * v).sum::<f64>()).exp();
        vec![C64::new(g, 0.0), C64::new(0.0, xi[0] * g), C64::new(xi[1] * xi[2] * g, g)]
    };
    let sol = solve_wholespace(&point, f_hat);
    let lap = solve_weak_laplace_wholespace(f_hat);

    let mut rng = stream(0, 1);
    let (mut mom, mut div, mut weak) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..1000 {
        let xi: Vec<f64> = (0..3).map(|_| uniform(&mut rng, -20.0, 20.0)).collect();
        mom = mom.max(sol.momentum_residual(&xi)?);
        div = div.max(sol.divergence_residual(&xi)?);
        weak = weak.max(lap.residual(&xi)?);
    }
    println!("1000 frequencies in [-20, 20]^3");
    println!("  momentum residual   {mom:.2e}");
    println!("  divergence residual {div:.2e}");
    println!("  weak Laplace        {weak:.2e}");

    let xi = [0.6, -1.1, 0.4];
    println!("at xi = {xi:?}: u_hat = {:.4?}", sol.u_hat(&xi)?);
    match sol.u_hat(&[0.0, 0.0, 0.0]) {
        Err(e) => println!("xi = 0 is rejected: {e}"),
        Ok(_) => println!("xi = 0 unexpectedly accepted"),
    }
    Ok(())
}
