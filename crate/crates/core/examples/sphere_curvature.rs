//! Mean curvature by the fundamental-form trace and by Δ_Γ x, on a sphere,
//! a bumpy spherical graph and a periodic graph.

use fbstokes::geometry::*;

fn main() -> Result<(), GeometryError> {
    for (r, dim) in [(1.0, 3), (2.5, 3), (1.5, 2)] {
        let patch = sphere_patch(r, dim)?;
        let p: &[f64] = if dim == 3 { &[0.9, 2.1] } else { &[0.7] };
        let h = mean_curvature(&patch, p)?;
        println!("S_{r} in R^{dim}: H = {:.15} (expected {:.15})", h.h_trace, -((dim - 1) as f64) / r);
    }

    // |x| = 1 + 0.1 Y_20 + 0.05 Y_31: closed-form spherical-graph curvature against the chart pipeline.
    let g = SphericalGraph::from_expansion(1.0, SphericalExpansion::new(vec![(2, 0, 0.1), (3, 1, 0.05)]));
    let patch = g.patch();
    println!("  theta    phi     formula          trace            laplace");
    for (theta, phi) in [(0.4, 0.0), (1.2, 1.0), (1.57, 2.5), (2.3, 4.0), (2.9, 5.5)] {
        let f = spherical_graph_mean_curvature(&g, phi, theta)?;
        let h = mean_curvature(&patch, &[theta, phi])?;
        println!("  {theta:<6} {phi:<6} {f:>16.12} {:>16.12} {:>16.12}", h.h_trace, h.h_laplace);
    }

    let graph = graph_patch(vec![(0.1, vec![1.0, 2.0]), (0.05, vec![-3.0, 1.0])], 1.0);
    let h = mean_curvature(&graph, &[0.2, -0.3])?;
    println!("graph x_3 = h(x'): H by trace {:.12}, by Laplace-Beltrami {:.12}", h.h_trace, h.h_laplace);
    Ok(())
}
