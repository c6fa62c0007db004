//! Laplace–Beltrami eigenvalues on S_R, the linearized curvature operator 𝓑,
//! its spectral gap and the orthonormal rigid-motion basis on B_R.

use fbstokes::geometry::*;

fn main() -> Result<(), GeometryError> {
    let radius = 1.5;
    println!("-B on S_{radius}: eigenvalue (l(l+1) - 2)/R^2 per degree");
    let b = sphere_operator_b(radius, &SphericalExpansion::new((0..=6).map(|l| (l, 0, 1.0)).collect()));
    for (l, _, v) in &b.terms {
        println!("  l = {l}: {:>10.6}", -v);
    }

    let gap = spectral_gap(radius, 8)?;
    println!("gap bound 4/R^2 = {:.10}", gap.bound);
    for (l, q) in &gap.rayleigh {
        println!("  Rayleigh quotient at l = {l}: {q:.10}");
    }
    println!("minimum {:.10} attained at l = {}", gap.min_ratio, gap.attained_at);

    for dim in [2, 3] {
        let basis = rigid_basis(radius, dim)?;
        let k = basis.dimension();
        let err = (&basis.gram - nalgebra::DMatrix::identity(k, k)).abs().max();
        println!("rigid basis in R^{dim}: {k} fields, |Gram - I| = {err:.2e}");
    }
    Ok(())
}
