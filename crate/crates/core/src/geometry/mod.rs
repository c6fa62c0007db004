//! Differential geometry of parametrized hypersurfaces in R^N.
//!
//! A [`SurfacePatch`] maps a parameter box in R^{N−1} into R^N. The unit
//! normal is the cofactor vector n_i = (−1)^{N+i} det(∂φ with row i removed),
//! normalized and multiplied by the patch orientation. Mean curvature follows
//! Δ_Γ x = H n, so a sphere of radius R with outward normal has H = −(N−1)/R.

mod graph;
mod harmonics;
mod sphere;

pub use graph::{spherical_graph_mean_curvature, SphericalGraph, POLE_TOL};
pub use harmonics::{real_harmonic, Jet1, RadialJet, SphericalExpansion};
pub use sphere::{
    circle_param_rule, circle_patch, closed_surface_identities, compatibility_residual, cylinder_patch, graph_patch, plane_patch,
    rigid_basis, sphere_operator_b, sphere_param_rule, sphere_patch, spectral_gap, ClosedSurfaceResiduals,
    CompatibilityResidual, RigidBasis, RigidField, SpectralGap,
};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Surface description as loaded from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SurfaceSpec {
    /// S_R ⊂ R^N, N = 2 or 3.
    Sphere {
        #[serde(rename = "R")]
        radius: f64,
        #[serde(rename = "N", default = "three")]
        dim: usize,
    },
    /// |x| = R + Σ c Y_{l,m}; entries are [l, m, c].
    SphericalGraph {
        #[serde(rename = "R", default = "unit")]
        radius: f64,
        r_series: Vec<(usize, i64, f64)>,
    },
    /// x_N = Σ amp cos(k·x′); entries are [amp, k_1, ..., k_{N−1}].
    Graph {
        h_series: Vec<Vec<f64>>,
        #[serde(default = "unit")]
        half_width: f64,
    },
}

fn unit() -> f64 {
    1.0
}

fn three() -> usize {
    3
}

impl SurfaceSpec {
    pub fn to_patch(&self) -> Result<SurfacePatch, GeometryError> {
        match self {
            SurfaceSpec::Sphere { radius, dim } => sphere_patch(*radius, *dim),
            SurfaceSpec::SphericalGraph { radius, r_series } => {
                Ok(SphericalGraph::from_expansion(*radius, SphericalExpansion::new(r_series.clone())).patch())
            }
            SurfaceSpec::Graph { h_series, half_width } => {
                if h_series.is_empty() || h_series.iter().any(|t| t.len() < 2 || t.len() != h_series[0].len()) {
                    return Err(GeometryError::Unsupported("h_series entries must be [amp, k_1, ..]".into()));
                }
                let terms = h_series.iter().map(|t| (t[0], t[1..].to_vec())).collect();
                Ok(graph_patch(terms, *half_width))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("chart is not an immersion at the evaluation point (|cofactor| = {0:e})")]
    RankDeficient(f64),
    #[error("evaluation too close to a pole (sin theta = {0:e})")]
    PoleProximity(f64),
    #[error("unsupported surface: {0}")]
    Unsupported(String),
}

/// φ and its first and second parameter derivatives at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartJet {
    pub x: DVector<f64>,
    /// d1[i] = ∂_i φ
    pub d1: Vec<DVector<f64>>,
    /// d2[i][j] = ∂_i ∂_j φ
    pub d2: Vec<Vec<DVector<f64>>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DerivMode {
    Analytic,
    /// Central differences with step `step` × (parameter-box scale).
    FiniteDifference { step: f64 },
}

type JetFn = Arc<dyn Fn(&[f64]) -> ChartJet + Send + Sync>;
type MapFn = Arc<dyn Fn(&[f64]) -> DVector<f64> + Send + Sync>;

#[derive(Clone)]
pub struct SurfacePatch {
    pub dim_ambient: usize,
    pub param_lo: Vec<f64>,
    pub param_hi: Vec<f64>,
    pub deriv_mode: DerivMode,
    /// +1 keeps the cofactor normal, −1 flips it.
    pub orientation: f64,
    phi: MapFn,
    jet: Option<JetFn>,
}

impl std::fmt::Debug for SurfacePatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SurfacePatch")
            .field("dim_ambient", &self.dim_ambient)
            .field("param_lo", &self.param_lo)
            .field("param_hi", &self.param_hi)
            .field("deriv_mode", &self.deriv_mode)
            .field("orientation", &self.orientation)
            .finish()
    }
}

impl SurfacePatch {
    /// Patch with analytic derivatives supplied by `jet`.
    pub fn analytic<J>(dim_ambient: usize, param_lo: Vec<f64>, param_hi: Vec<f64>, jet: J) -> Self
    where
        J: Fn(&[f64]) -> ChartJet + Send + Sync + 'static,
    {
        let jet: JetFn = Arc::new(jet);
        let j2 = jet.clone();
        Self {
            dim_ambient,
            param_lo,
            param_hi,
            deriv_mode: DerivMode::Analytic,
            orientation: 1.0,
            phi: Arc::new(move |p| j2(p).x),
            jet: Some(jet),
        }
    }

    /// Patch whose derivatives are taken by central differences of `phi`.
    pub fn finite_difference<P>(dim_ambient: usize, param_lo: Vec<f64>, param_hi: Vec<f64>, step: f64, phi: P) -> Self
    where
        P: Fn(&[f64]) -> DVector<f64> + Send + Sync + 'static,
    {
        Self {
            dim_ambient,
            param_lo,
            param_hi,
            deriv_mode: DerivMode::FiniteDifference { step },
            orientation: 1.0,
            phi: Arc::new(phi),
            jet: None,
        }
    }

    /// Same chart, derivatives by central differences.
    pub fn to_finite_difference(&self, step: f64) -> Self {
        let phi = self.phi.clone();
        Self {
            deriv_mode: DerivMode::FiniteDifference { step },
            jet: None,
            phi,
            ..self.clone()
        }
    }

    pub fn flipped(mut self) -> Self {
        self.orientation = -self.orientation;
        self
    }

    pub fn param_dim(&self) -> usize {
        self.dim_ambient - 1
    }

    pub fn phi(&self, p: &[f64]) -> DVector<f64> {
        (self.phi)(p)
    }

    fn scale(&self) -> f64 {
        self.param_lo
            .iter()
            .zip(&self.param_hi)
            .map(|(a, b)| (b - a).abs())
            .fold(0.0, f64::max)
            .max(1e-300)
    }

    fn fd_step(&self) -> f64 {
        match self.deriv_mode {
            DerivMode::Analytic => 1e-4 * self.scale(),
            DerivMode::FiniteDifference { step } => step * self.scale(),
        }
    }

    pub fn jet(&self, p: &[f64]) -> ChartJet {
        if let Some(j) = &self.jet {
            return j(p);
        }
        let h = self.fd_step();
        let m = self.param_dim();
        let at = |shifts: &[(usize, f64)]| {
            let mut q = p.to_vec();
            for &(i, s) in shifts {
                q[i] += s;
            }
            self.phi(&q)
        };
        let x = self.phi(p);
        let d1: Vec<DVector<f64>> = (0..m)
            .map(|i| (at(&[(i, h)]) - at(&[(i, -h)])) / (2.0 * h))
            .collect();
        let d2 = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        if i == j {
                            (at(&[(i, h)]) - &x * 2.0 + at(&[(i, -h)])) / (h * h)
                        } else {
                            (at(&[(i, h), (j, h)]) - at(&[(i, h), (j, -h)]) - at(&[(i, -h), (j, h)])
                                + at(&[(i, -h), (j, -h)]))
                                / (4.0 * h * h)
                        }
                    })
                    .collect()
            })
            .collect();
        ChartJet { x, d1, d2 }
    }
}

/// Value, parameter gradient and parameter Hessian of a scalar field on a chart.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarJet {
    pub value: f64,
    pub grad: DVector<f64>,
    pub hess: DMatrix<f64>,
}

impl ScalarJet {
    /// Component `a` of the chart map itself.
    pub fn coordinate(jet: &ChartJet, a: usize) -> Self {
        let m = jet.d1.len();
        Self {
            value: jet.x[a],
            grad: DVector::from_fn(m, |i, _| jet.d1[i][a]),
            hess: DMatrix::from_fn(m, m, |i, j| jet.d2[i][j][a]),
        }
    }
}

fn tangent_matrix(jet: &ChartJet) -> DMatrix<f64> {
    let n = jet.x.len();
    let m = jet.d1.len();
    DMatrix::from_fn(n, m, |r, c| jet.d1[c][r])
}

/// Cofactor normal (unnormalized, before orientation).
pub fn cofactor_normal(tangents: &DMatrix<f64>) -> DVector<f64> {
    let n = tangents.nrows();
    DVector::from_fn(n, |i, _| {
        let minor = tangents.clone().remove_row(i);
        let sign = if (n + i + 1).is_multiple_of(2) { 1.0 } else { -1.0 };
        sign * minor.determinant()
    })
}

pub fn unit_normal(patch: &SurfacePatch, p: &[f64]) -> Result<DVector<f64>, GeometryError> {
    normal_from_jet(patch, &patch.jet(p))
}

fn normal_from_jet(patch: &SurfacePatch, jet: &ChartJet) -> Result<DVector<f64>, GeometryError> {
    let t = tangent_matrix(jet);
    let raw = cofactor_normal(&t);
    let size: f64 = jet.d1.iter().map(|v| v.norm()).product();
    let len = raw.norm();
    if len <= 1e-12 * size.max(1e-300) {
        return Err(GeometryError::RankDeficient(len));
    }
    Ok(raw * (patch.orientation / len))
}

/// Cached geometric quantities at one chart point.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometryAtPoint {
    pub jet: ChartJet,
    pub tau: Vec<DVector<f64>>,
    pub n: DVector<f64>,
    /// G_ij = ⟨τ_i, τ_j⟩
    pub g: DMatrix<f64>,
    pub g_inv: DMatrix<f64>,
    pub g_det: f64,
    /// ℓ_ij = ⟨∂_i∂_j φ, n⟩
    pub l: DMatrix<f64>,
    /// christoffel[k][(i, j)] = Λ^k_ij
    pub christoffel: Vec<DMatrix<f64>>,
    /// H = g^{ij} ℓ_ij
    pub h: f64,
    /// H / (N − 1), the mean of the principal curvatures.
    pub h_mean: f64,
}

/// (G, L, det G, G⁻¹)
pub fn fundamental_forms(
    patch: &SurfacePatch,
    p: &[f64],
) -> Result<(DMatrix<f64>, DMatrix<f64>, f64, DMatrix<f64>), GeometryError> {
    let geo = geometry_at(patch, p)?;
    Ok((geo.g, geo.l, geo.g_det, geo.g_inv))
}

fn metric(jet: &ChartJet) -> DMatrix<f64> {
    let m = jet.d1.len();
    DMatrix::from_fn(m, m, |i, j| jet.d1[i].dot(&jet.d1[j]))
}

/// ∂_k G_ij, from second derivatives (analytic mode) or by differencing G.
fn metric_derivatives(patch: &SurfacePatch, p: &[f64], jet: &ChartJet) -> Vec<DMatrix<f64>> {
    let m = jet.d1.len();
    match patch.deriv_mode {
        DerivMode::Analytic => (0..m)
            .map(|k| DMatrix::from_fn(m, m, |i, j| jet.d2[k][i].dot(&jet.d1[j]) + jet.d1[i].dot(&jet.d2[k][j])))
            .collect(),
        DerivMode::FiniteDifference { .. } => {
            let h = patch.fd_step();
            (0..m)
                .map(|k| {
                    let mut a = p.to_vec();
                    let mut b = p.to_vec();
                    a[k] += h;
                    b[k] -= h;
                    (metric(&patch.jet(&a)) - metric(&patch.jet(&b))) / (2.0 * h)
                })
                .collect()
        }
    }
}

/// Christoffel symbols from the metric: Λ^k_ij = ½ g^{kr}(∂_i g_jr + ∂_j g_ri − ∂_r g_ij).
pub fn christoffel(patch: &SurfacePatch, p: &[f64]) -> Result<Vec<DMatrix<f64>>, GeometryError> {
    let jet = patch.jet(p);
    let g = metric(&jet);
    let g_inv = g.clone().try_inverse().ok_or(GeometryError::RankDeficient(g.determinant()))?;
    Ok(christoffel_from_metric(&g_inv, &metric_derivatives(patch, p, &jet)))
}

fn christoffel_from_metric(g_inv: &DMatrix<f64>, dg: &[DMatrix<f64>]) -> Vec<DMatrix<f64>> {
    let m = g_inv.nrows();
    (0..m)
        .map(|k| {
            DMatrix::from_fn(m, m, |i, j| {
                0.5 * (0..m)
                    .map(|r| g_inv[(k, r)] * (dg[i][(j, r)] + dg[j][(r, i)] - dg[r][(i, j)]))
                    .sum::<f64>()
            })
        })
        .collect()
}

/// Christoffel symbols by their definition Λ^k_ij = ⟨∂_i∂_j φ, τ^k⟩, τ^k = g^{kr} τ_r.
pub fn christoffel_direct(patch: &SurfacePatch, p: &[f64]) -> Result<Vec<DMatrix<f64>>, GeometryError> {
    let jet = patch.jet(p);
    let g = metric(&jet);
    let g_inv = g.clone().try_inverse().ok_or(GeometryError::RankDeficient(g.determinant()))?;
    let m = jet.d1.len();
    let dual: Vec<DVector<f64>> = (0..m)
        .map(|k| (0..m).fold(DVector::zeros(jet.x.len()), |acc, r| acc + &jet.d1[r] * g_inv[(k, r)]))
        .collect();
    Ok((0..m)
        .map(|k| DMatrix::from_fn(m, m, |i, j| jet.d2[i][j].dot(&dual[k])))
        .collect())
}

pub fn geometry_at(patch: &SurfacePatch, p: &[f64]) -> Result<GeometryAtPoint, GeometryError> {
    let jet = patch.jet(p);
    let n = normal_from_jet(patch, &jet)?;
    let m = jet.d1.len();
    let g = metric(&jet);
    let g_det = g.determinant();
    if g_det <= 0.0 {
        return Err(GeometryError::RankDeficient(g_det));
    }
    let g_inv = g.clone().try_inverse().ok_or(GeometryError::RankDeficient(g_det))?;
    let l = DMatrix::from_fn(m, m, |i, j| jet.d2[i][j].dot(&n));
    let christoffel = christoffel_from_metric(&g_inv, &metric_derivatives(patch, p, &jet));
    let h = g_inv.component_mul(&l).sum();
    Ok(GeometryAtPoint {
        tau: jet.d1.clone(),
        n,
        g,
        g_inv,
        g_det,
        l,
        christoffel,
        h,
        h_mean: h / m as f64,
        jet,
    })
}

/// Δ_Γ f = g^{ij} ∂_i∂_j f − g^{ik} Λ^j_ik ∂_j f.
pub fn laplace_beltrami(patch: &SurfacePatch, p: &[f64], f: &ScalarJet) -> Result<f64, GeometryError> {
    Ok(laplace_beltrami_at(&geometry_at(patch, p)?, f))
}

/// [`laplace_beltrami`] on precomputed geometry.
pub fn laplace_beltrami_at(geo: &GeometryAtPoint, f: &ScalarJet) -> f64 {
    let m = geo.g_inv.nrows();
    let mut s = geo.g_inv.component_mul(&f.hess).sum();
    for j in 0..m {
        let contraction = geo.g_inv.component_mul(&geo.christoffel[j]).sum();
        s -= contraction * f.grad[j];
    }
    s
}

/// Divergence form (1/√g) ∂_i(√g g^{ij} ∂_j f), expanded with ∂_k g^{ij} and ∂_k log √g.
pub fn laplace_beltrami_divergence(patch: &SurfacePatch, p: &[f64], f: &ScalarJet) -> Result<f64, GeometryError> {
    let jet = patch.jet(p);
    let g = metric(&jet);
    let g_inv = g.clone().try_inverse().ok_or(GeometryError::RankDeficient(g.determinant()))?;
    let dg = metric_derivatives(patch, p, &jet);
    let m = g.nrows();
    let mut s = g_inv.component_mul(&f.hess).sum();
    for i in 0..m {
        let dlog = 0.5 * g_inv.component_mul(&dg[i]).sum();
        let dginv = -(&g_inv * &dg[i] * &g_inv);
        for j in 0..m {
            s += (dginv[(i, j)] + dlog * g_inv[(i, j)]) * f.grad[j];
        }
    }
    Ok(s)
}

/// Mean curvature by two routes, plus the residual of
/// ∂_i(√g g^{ij} τ_j) = √g g^{ij} ℓ_ij n with the left side differenced
/// (base step 1e−4 × parameter scale).
#[derive(Debug, Clone, PartialEq)]
pub struct MeanCurvature {
    /// ⟨Δ_Γ φ, n⟩
    pub h_laplace: f64,
    /// g^{ij} ℓ_ij
    pub h_trace: f64,
    pub n: DVector<f64>,
    pub divergence_identity_residual: f64,
}

pub fn mean_curvature(patch: &SurfacePatch, p: &[f64]) -> Result<MeanCurvature, GeometryError> {
    let geo = geometry_at(patch, p)?;
    let dim = patch.dim_ambient;
    let lap = DVector::from_fn(dim, |a, _| laplace_beltrami_at(&geo, &ScalarJet::coordinate(&geo.jet, a)));
    let h_laplace = lap.dot(&geo.n);

    let flux = |q: &[f64]| -> Result<Vec<DVector<f64>>, GeometryError> {
        let jet = patch.jet(q);
        let g = metric(&jet);
        let gi = g.clone().try_inverse().ok_or(GeometryError::RankDeficient(g.determinant()))?;
        let sg = g.determinant().sqrt();
        let m = jet.d1.len();
        Ok((0..m)
            .map(|i| (0..m).fold(DVector::zeros(dim), |acc, j| acc + &jet.d1[j] * (sg * gi[(i, j)])))
            .collect())
    };
    // Central differences at h and h/2, Richardson-combined to fourth order.
    let m = patch.param_dim();
    let divergence = |h: f64| -> Result<DVector<f64>, GeometryError> {
        let mut acc = DVector::zeros(dim);
        for i in 0..m {
            let mut a = p.to_vec();
            let mut b = p.to_vec();
            a[i] += h;
            b[i] -= h;
            acc += (&flux(&a)?[i] - &flux(&b)?[i]) / (2.0 * h);
        }
        Ok(acc)
    };
    let h = 1e-4 * patch.scale();
    let lhs = (divergence(0.5 * h)? * 4.0 - divergence(h)?) / 3.0;
    let rhs = &geo.n * (geo.g_det.sqrt() * geo.h);
    Ok(MeanCurvature {
        h_laplace,
        h_trace: geo.h,
        n: geo.n.clone(),
        divergence_identity_residual: (lhs - rhs).norm(),
    })
}
