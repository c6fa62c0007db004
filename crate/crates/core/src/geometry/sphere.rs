//! Standard patches and the spectral machinery on spheres: the operator
//! 𝓑 = Δ_{S_R} + (N−1)/R², rigid motions on B_R, the mass/barycenter
//! compatibility integrals and the closed-surface integral identities.

use super::graph::SphericalGraph;
use super::harmonics::{real_harmonic, RadialJet, SphericalExpansion};
use super::{geometry_at, laplace_beltrami_at, ChartJet, GeometryError, ScalarJet, SurfacePatch};
use crate::quadrature::{ball_volume, sphere_area, unit_sphere_points, BallRule, SphereRule};
use nalgebra::{DMatrix, DVector};
use std::f64::consts::PI;

/// Sphere of radius R: (θ, φ) chart for N = 3, clockwise circle for N = 2.
pub fn sphere_patch(radius: f64, dim: usize) -> Result<SurfacePatch, GeometryError> {
    match dim {
        2 => Ok(circle_patch(radius)),
        3 => Ok(SphericalGraph::sphere(radius).patch()),
        _ => Err(GeometryError::Unsupported(format!("sphere in dimension {dim}"))),
    }
}

/// t ↦ R(cos t, −sin t); the cofactor normal of this traversal is outward.
pub fn circle_patch(radius: f64) -> SurfacePatch {
    SurfacePatch::analytic(2, vec![0.0], vec![2.0 * PI], move |p| {
        let (s, c) = p[0].sin_cos();
        ChartJet {
            x: DVector::from_vec(vec![radius * c, -radius * s]),
            d1: vec![DVector::from_vec(vec![-radius * s, -radius * c])],
            d2: vec![vec![DVector::from_vec(vec![-radius * c, radius * s])]],
        }
    })
}

/// (u, v) ↦ (R cos u, R sin u, v), outward normal.
pub fn cylinder_patch(radius: f64) -> SurfacePatch {
    SurfacePatch::analytic(3, vec![0.0, -1.0], vec![2.0 * PI, 1.0], move |p| {
        let (s, c) = p[0].sin_cos();
        let z = DVector::zeros(3);
        ChartJet {
            x: DVector::from_vec(vec![radius * c, radius * s, p[1]]),
            d1: vec![
                DVector::from_vec(vec![-radius * s, radius * c, 0.0]),
                DVector::from_vec(vec![0.0, 0.0, 1.0]),
            ],
            d2: vec![
                vec![DVector::from_vec(vec![-radius * c, -radius * s, 0.0]), z.clone()],
                vec![z.clone(), z],
            ],
        }
    })
}

/// The hyperplane x_N = 0 parametrized by x′.
pub fn plane_patch(dim: usize) -> SurfacePatch {
    let m = dim - 1;
    SurfacePatch::analytic(dim, vec![-1.0; m], vec![1.0; m], move |p| ChartJet {
        x: DVector::from_fn(dim, |i, _| if i < m { p[i] } else { 0.0 }),
        d1: (0..m).map(|i| DVector::from_fn(dim, |k, _| if k == i { 1.0 } else { 0.0 })).collect(),
        d2: vec![vec![DVector::zeros(dim); m]; m],
    })
}

/// Graph x_N = h(x′) with h = Σ amp·cos(k·x′); each term is (amp, k).
pub fn graph_patch(terms: Vec<(f64, Vec<f64>)>, half_width: f64) -> SurfacePatch {
    let dim = terms.first().map_or(3, |t| t.1.len() + 1);
    let m = dim - 1;
    SurfacePatch::analytic(dim, vec![-half_width; m], vec![half_width; m], move |p| {
        let mut h = 0.0;
        let mut grad = vec![0.0; m];
        let mut hess = vec![vec![0.0; m]; m];
        for (amp, k) in &terms {
            let phase: f64 = k.iter().zip(p).map(|(a, b)| a * b).sum();
            let (s, c) = phase.sin_cos();
            h += amp * c;
            for i in 0..m {
                grad[i] -= amp * s * k[i];
                for j in 0..m {
                    hess[i][j] -= amp * c * k[i] * k[j];
                }
            }
        }
        ChartJet {
            x: DVector::from_fn(dim, |i, _| if i < m { p[i] } else { h }),
            d1: (0..m)
                .map(|i| DVector::from_fn(dim, |k, _| if k == i { 1.0 } else if k == m { grad[i] } else { 0.0 }))
                .collect(),
            d2: (0..m)
                .map(|i| {
                    (0..m)
                        .map(|j| DVector::from_fn(dim, |k, _| if k == m { hess[i][j] } else { 0.0 }))
                        .collect()
                })
                .collect(),
        }
    })
}

impl RadialJet {
    /// Chart jet in (θ, φ) order.
    pub fn to_scalar_jet(self) -> ScalarJet {
        ScalarJet {
            value: self.v,
            grad: DVector::from_vec(vec![self.t, self.p]),
            hess: DMatrix::from_row_slice(2, 2, &[self.tt, self.tp, self.tp, self.pp]),
        }
    }
}

/// 𝓑 = Δ_{S_R} + 2/R² on S_R ⊂ R³, applied to a harmonic expansion.
pub fn sphere_operator_b(radius: f64, h: &SphericalExpansion) -> SphericalExpansion {
    let r2 = radius * radius;
    SphericalExpansion::new(
        h.terms
            .iter()
            .map(|&(l, m, c)| (l, m, c * (2.0 - (l * (l + 1)) as f64) / r2))
            .collect(),
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralGap {
    /// 4/R², the smallest eigenvalue of −𝓑 on degrees ≥ 2.
    pub bound: f64,
    /// −(𝓑Y, Y)/‖Y‖² per degree, computed by quadrature of laplace_beltrami on S_R.
    pub rayleigh: Vec<(usize, f64)>,
    pub min_ratio: f64,
    pub attained_at: usize,
}

/// Rayleigh quotients of −𝓑 over the full degree-l harmonic space, l = 2..=lmax.
pub fn spectral_gap(radius: f64, lmax: usize) -> Result<SpectralGap, GeometryError> {
    let patch = SphericalGraph::sphere(radius).patch();
    let rule = SphereRule::for_degree(lmax + 1);
    let r2 = radius * radius;
    let mut rayleigh = Vec::new();
    for l in 2..=lmax {
        let mut num = 0.0;
        let mut den = 0.0;
        for &(t, p, w) in &rule.points {
            let geo = geometry_at(&patch, &[t, p])?;
            let f = (-(l as i64)..=l as i64)
                .fold(RadialJet::default(), |acc, m| acc.plus(real_harmonic(l, m, t, p)));
            let bf = laplace_beltrami_at(&geo, &f.to_scalar_jet()) + 2.0 / r2 * f.v;
            num -= w * r2 * bf * f.v;
            den += w * r2 * f.v * f.v;
        }
        rayleigh.push((l, num / den));
    }
    let (attained_at, min_ratio) = rayleigh
        .iter()
        .copied()
        .fold((0, f64::INFINITY), |acc, (l, v)| if v < acc.1 { (l, v) } else { acc });
    Ok(SpectralGap {
        bound: 4.0 / r2,
        rayleigh,
        min_ratio,
        attained_at,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RigidField {
    /// c e_i
    Translation { i: usize, c: f64 },
    /// c (x_i e_j − x_j e_i)
    Rotation { i: usize, j: usize, c: f64 },
}

impl RigidField {
    pub fn eval(&self, y: &[f64]) -> DVector<f64> {
        let mut v = DVector::zeros(y.len());
        match *self {
            RigidField::Translation { i, c } => v[i] = c,
            RigidField::Rotation { i, j, c } => {
                v[j] += c * y[i];
                v[i] -= c * y[j];
            }
        }
        v
    }
}

#[derive(Debug, Clone)]
pub struct RigidBasis {
    pub fields: Vec<RigidField>,
    /// (p_ℓ, p_m) on B_R by quadrature.
    pub gram: DMatrix<f64>,
    pub rule: BallRule,
    /// Set when the Gram matrix misses the identity by more than 1e−8.
    pub warning: Option<String>,
}

impl RigidBasis {
    pub fn dimension(&self) -> usize {
        self.fields.len()
    }

    pub fn inner(&self, a: &dyn Fn(&[f64]) -> DVector<f64>, b: &dyn Fn(&[f64]) -> DVector<f64>) -> f64 {
        self.rule.integrate(|y| a(y).dot(&b(y)))
    }
}

/// Orthonormal basis of the rigid motions {u : D(u) = 0} in L²(B_R).
pub fn rigid_basis(radius: f64, dim: usize) -> Result<RigidBasis, GeometryError> {
    if !(2..=3).contains(&dim) {
        return Err(GeometryError::Unsupported(format!("rigid basis in dimension {dim}")));
    }
    let vol = ball_volume(dim, radius);
    let c0 = 1.0 / vol.sqrt();
    let c1 = ((dim + 2) as f64 / (2.0 * radius * radius * vol)).sqrt();
    let mut fields: Vec<RigidField> = (0..dim).map(|i| RigidField::Translation { i, c: c0 }).collect();
    for i in 0..dim {
        for j in (i + 1)..dim {
            fields.push(RigidField::Rotation { i, j, c: c1 });
        }
    }
    let rule = BallRule::new(dim, radius, 6, 4);
    let k = fields.len();
    let gram = DMatrix::from_fn(k, k, |a, b| rule.integrate(|y| fields[a].eval(y).dot(&fields[b].eval(y))));
    let err = (&gram - DMatrix::identity(k, k)).abs().max();
    let warning = (err > 1e-8).then(|| format!("ball quadrature under-resolved: Gram error {err:e}"));
    Ok(RigidBasis {
        fields,
        gram,
        rule,
        warning,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompatibilityResidual {
    /// Σ_{k=1}^{N} C(N,k) ∫ (ρ₀/R)^k dω over the unit-sphere parametrization.
    pub volume_raw: f64,
    /// volume_raw / |S^{N−1}|; equals (1+c/R)^N − 1 for constant ρ₀ = c.
    pub volume: f64,
    /// Σ_{k=1}^{N+1} C(N+1,k) ∫ y_i (ρ₀/R)^k dω, y = Rω.
    pub barycenter_raw: Vec<f64>,
    /// barycenter_raw / (R |S^{N−1}|)
    pub barycenter: Vec<f64>,
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Mass and barycenter compatibility of the initial height ρ₀ on S_R.
/// `rho0` receives the point y ∈ S_R.
pub fn compatibility_residual<F>(rho0: F, radius: f64, dim: usize, resolution: usize) -> CompatibilityResidual
where
    F: Fn(&[f64]) -> f64,
{
    let mut volume_raw = 0.0;
    let mut barycenter_raw = vec![0.0; dim];
    for (omega, w) in unit_sphere_points(dim, resolution) {
        let y: Vec<f64> = omega.iter().map(|c| radius * c).collect();
        let q = rho0(&y) / radius;
        let vol: f64 = (1..=dim).map(|k| binomial(dim, k) * q.powi(k as i32)).sum();
        let bar: f64 = (1..=dim + 1).map(|k| binomial(dim + 1, k) * q.powi(k as i32)).sum();
        volume_raw += w * vol;
        for i in 0..dim {
            barycenter_raw[i] += w * y[i] * bar;
        }
    }
    let area = sphere_area(dim);
    CompatibilityResidual {
        volume_raw,
        volume: volume_raw / area,
        barycenter: barycenter_raw.iter().map(|b| b / (radius * area)).collect(),
        barycenter_raw,
    }
}

/// Parameter-space rule for (θ, φ) charts: ∫ f dθ dφ ≈ Σ w f.
pub fn sphere_param_rule(lmax: usize) -> Vec<(Vec<f64>, f64)> {
    SphereRule::for_degree(lmax)
        .points
        .iter()
        .map(|&(t, p, w)| (vec![t, p], w / t.sin()))
        .collect()
}

/// Uniform rule on [0, 2π) for the circle chart; spectrally accurate for periodic integrands.
pub fn circle_param_rule(n: usize) -> Vec<(Vec<f64>, f64)> {
    let h = 2.0 * PI / n as f64;
    (0..n).map(|k| (vec![k as f64 * h], h)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosedSurfaceResiduals {
    /// max_i |∫_Γ Δ_Γ x_i dω|
    pub first_moment: f64,
    /// max_{i<j} |∫_Γ (x_i Δ_Γ x_j − x_j Δ_Γ x_i) dω|
    pub angular: f64,
    /// ∫_Γ dω, for coverage sanity checks.
    pub area: f64,
}

/// Integral identities that hold on any closed surface: the tangential
/// Laplacian of the position has zero mean and zero angular moment.
pub fn closed_surface_identities(
    patch: &SurfacePatch,
    rule: &[(Vec<f64>, f64)],
) -> Result<ClosedSurfaceResiduals, GeometryError> {
    let n = patch.dim_ambient;
    let mut first = vec![0.0; n];
    let mut ang = DMatrix::<f64>::zeros(n, n);
    let mut area = 0.0;
    for (p, w) in rule {
        let geo = geometry_at(patch, p)?;
        let dw = w * geo.g_det.sqrt();
        let lap: Vec<f64> = (0..n)
            .map(|a| laplace_beltrami_at(&geo, &ScalarJet::coordinate(&geo.jet, a)))
            .collect();
        area += dw;
        for i in 0..n {
            first[i] += dw * lap[i];
            for j in 0..n {
                ang[(i, j)] += dw * (geo.jet.x[i] * lap[j] - geo.jet.x[j] * lap[i]);
            }
        }
    }
    Ok(ClosedSurfaceResiduals {
        first_moment: first.iter().fold(0.0, |a, v| a.max(v.abs())),
        angular: ang.abs().max(),
        area,
    })
}
