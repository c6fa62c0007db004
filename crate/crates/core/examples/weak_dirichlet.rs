//! Weak Dirichlet problem on the half-space by odd/even reflection and FFT:
//! an exact gradient field recovers its potential, and a general bump
//! converges at second order in the grid spacing.

use fbstokes::halfspace::{solve_weak_dirichlet_halfspace, SolveError};

fn main() -> Result<(), SolveError> {
    let s2 = 0.3;
    // f = ∇φ with φ = x_2 exp(−|x|²/s²), which vanishes on x_2 = 0.
    let phi = move |x: &[f64]| x[1] * (-(x[0] * x[0] + x[1] * x[1]) / s2).exp();
    let grad = move |x: &[f64]| {
        let e = (-(x[0] * x[0] + x[1] * x[1]) / s2).exp();
        vec![-2.0 * x[0] * x[1] / s2 * e, (1.0 - 2.0 * x[1] * x[1] / s2) * e]
    };
    let sol = solve_weak_dirichlet_halfspace(grad, 2, 1.0, 64)?;
    println!("gradient datum: max |u - phi| = {:.2e}, boundary trace {:.2e}", sol.max_error(phi), sol.boundary_max());

    let c = 0.5;
    let bump = move |x: &[f64]| {
        let r2 = x[0] * x[0] + (x[1] - c) * (x[1] - c);
        let rm = x[0] * x[0] + (x[1] + c) * (x[1] + c);
        vec![0.0, (-r2 / s2).exp() + (-rm / s2).exp()]
    };
    let div = move |x: &[f64]| {
        let r2 = x[0] * x[0] + (x[1] - c) * (x[1] - c);
        let rm = x[0] * x[0] + (x[1] + c) * (x[1] + c);
        -2.0 * (x[1] - c) / s2 * (-r2 / s2).exp() - 2.0 * (x[1] + c) / s2 * (-rm / s2).exp()
    };
    println!("bump datum: n, Laplacian residual");
    let mut prev: Option<f64> = None;
    for n in [32, 64, 128, 256] {
        let r = solve_weak_dirichlet_halfspace(bump, 2, 1.0, n)?.laplacian_residual(div);
        match prev {
            Some(p) => println!("  {n:<4} {r:.3e}  order {:.2}", (p / r).log2()),
            None => println!("  {n:<4} {r:.3e}"),
        }
        prev = Some(r);
    }
    Ok(())
}
