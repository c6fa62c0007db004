//! Star-shaped surfaces |x| = r(ω) in R³ and the closed-form mean curvature
//! of such a graph.

use super::harmonics::{RadialJet, SphericalExpansion};
use super::{ChartJet, GeometryError, SurfacePatch};
use nalgebra::DVector;
use std::f64::consts::PI;
use std::sync::Arc;

/// Distance below which sin θ counts as a pole.
pub const POLE_TOL: f64 = 1e-6;

type RadiusFn = Arc<dyn Fn(f64, f64) -> RadialJet + Send + Sync>;

/// |x| = r(φ, θ). The evaluator returns r and its θ/φ derivatives.
#[derive(Clone)]
pub struct SphericalGraph {
    r: RadiusFn,
}

impl std::fmt::Debug for SphericalGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("SphericalGraph")
    }
}

impl SphericalGraph {
    /// `r(phi, theta)` must return the jet in the (θ, φ) derivative layout of [`RadialJet`].
    pub fn new<F>(r: F) -> Self
    where
        F: Fn(f64, f64) -> RadialJet + Send + Sync + 'static,
    {
        Self { r: Arc::new(r) }
    }

    pub fn sphere(radius: f64) -> Self {
        Self::new(move |_, _| RadialJet::constant(radius))
    }

    /// r = radius + Σ c_{lm} Y_{l,m}.
    pub fn from_expansion(radius: f64, expansion: SphericalExpansion) -> Self {
        Self::new(move |phi, theta| {
            let mut j = expansion.eval(theta, phi);
            j.v += radius;
            j
        })
    }

    pub fn radius(&self, phi: f64, theta: f64) -> RadialJet {
        (self.r)(phi, theta)
    }

    /// Chart (θ, φ) ↦ r ω with analytic derivatives; its cofactor normal is outward.
    pub fn patch(&self) -> SurfacePatch {
        let r = self.r.clone();
        SurfacePatch::analytic(3, vec![0.0, 0.0], vec![PI, 2.0 * PI], move |p| {
            spherical_graph_jet(&r(p[1], p[0]), p[0], p[1])
        })
    }
}

fn spherical_graph_jet(r: &RadialJet, theta: f64, phi: f64) -> ChartJet {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let w = DVector::from_vec(vec![cp * st, sp * st, ct]);
    let w_t = DVector::from_vec(vec![cp * ct, sp * ct, -st]);
    let w_p = DVector::from_vec(vec![-sp * st, cp * st, 0.0]);
    let w_tt = -&w;
    let w_tp = DVector::from_vec(vec![-sp * ct, cp * ct, 0.0]);
    let w_pp = DVector::from_vec(vec![-cp * st, -sp * st, 0.0]);

    let d_t = &w * r.t + &w_t * r.v;
    let d_p = &w * r.p + &w_p * r.v;
    let d_tt = &w * r.tt + &w_t * (2.0 * r.t) + &w_tt * r.v;
    let d_tp = &w * r.tp + &w_p * r.t + &w_t * r.p + &w_tp * r.v;
    let d_pp = &w * r.pp + &w_p * (2.0 * r.p) + &w_pp * r.v;
    ChartJet {
        x: &w * r.v,
        d1: vec![d_t, d_p],
        d2: vec![vec![d_tt, d_tp.clone()], vec![d_tp, d_pp]],
    }
}

/// Closed-form mean curvature of |x| = r(φ, θ):
///
/// H = (1/(r sin θ)) {∂_φ(r_φ/(sin θ W)) + ∂_θ(sin θ r_θ / W)} − 2/W,
/// W = √(r² + r_θ² + (r_φ/sin θ)²),
///
/// with the derivatives of W expanded from the jet of r. Sign convention
/// matches the outward normal and Δ_Γ x = H n.
pub fn spherical_graph_mean_curvature(graph: &SphericalGraph, phi: f64, theta: f64) -> Result<f64, GeometryError> {
    let (s, c) = theta.sin_cos();
    if s.abs() < POLE_TOL {
        return Err(GeometryError::PoleProximity(s));
    }
    let r = graph.radius(phi, theta);
    let s2 = s * s;
    let w2 = r.v * r.v + r.t * r.t + r.p * r.p / s2;
    let w = w2.sqrt();
    let dw_p = (2.0 * r.v * r.p + 2.0 * r.t * r.tp + 2.0 * r.p * r.pp / s2) / (2.0 * w);
    let dw_t = (2.0 * r.v * r.t + 2.0 * r.t * r.tt + 2.0 * r.p * r.tp / s2 - 2.0 * r.p * r.p * c / (s2 * s)) / (2.0 * w);
    let term_p = r.pp / (s * w) - r.p * dw_p / (s * w2);
    let term_t = (c * r.t + s * r.tt) / w - s * r.t * dw_t / w2;
    Ok((term_p + term_t) / (r.v * s) - 2.0 / w)
}
