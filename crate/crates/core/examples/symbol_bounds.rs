//! Bound constants of the resolvent symbols over the default sector grid,
//! plus the λ1 beyond which |E_0| stays bounded below.

use fbstokes::symbols::*;

fn main() -> Result<(), SymbolError> {
    let grid = SectorGrid::default();
    let nodes = grid.nodes();
    println!("sector angle {:.4}, {} nodes, mu in {:?}", grid.sector_angle, nodes.len(), grid.mus);

    let cases = [
        ("Re B / (|lambda|^1/2 + A)", SymbolFunctional::ReB, Normalizer::SqrtLambdaPlusA),
        ("|B| / ((|lambda|/mu)^1/2 + A)", SymbolFunctional::AbsB, Normalizer::SqrtLambdaOverMuPlusA),
        ("|D| / ((|lambda|/mu)^1/2 + A)^3", SymbolFunctional::AbsD, Normalizer::SqrtLambdaOverMuPlusACubed),
    ];
    for (label, f, w) in cases {
        let b = estimate_bound_constant(f, w, &nodes, grid.sigma)?;
        println!("{label:<34} min {:.6}  max {:.6}", b.c_min, b.c_max);
        println!("{:<34} argmin lambda={:.3} A={:.3} mu={}", "", b.argmin.lambda, b.argmin.a, b.argmin.mu);
    }

    // Near-zeros of E_0 sit close to the sector edge at moderate |lambda|; search on the finer grid.
    let est = find_lambda1(&grid.refined(), 0.05, 1e-2, 1e2, 30)?;
    println!("lambda1 = {:.5} gives min |E_0|/weight = {:.4} over [lambda1, 1e4 lambda1]", est.lambda1, est.bound.c_min);

    // The cubic D factors the Lopatinski determinant exactly.
    let (a, b) = (num_complex::Complex64::new(0.8, 0.0), num_complex::Complex64::new(1.4, 0.6));
    println!("det L - (B-A) D = {:.2e}", (compute_det_l(a, b) - (b - a) * compute_d(a, b)).norm());
    Ok(())
}
