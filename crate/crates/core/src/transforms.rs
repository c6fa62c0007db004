//! Hanzawa and partial-Lagrange changes of variables and the algebra of
//! their Jacobians.
//!
//! Index convention throughout: K_ij = ∂_iΨ_j (row = derivative index), so
//! (I + K)(I + V0) = I and ∂/∂x_i = Σ_j (δ_ij + V0_ij) ∂/∂y_j. Gradients of
//! vector fields use the same layout: grad[(i, j)] = ∂_i F_j.

use crate::cutoff::{cutoff, cutoff_derivative};
use crate::geometry::{geometry_at, mean_curvature, GeometryError, SphericalGraph, SurfacePatch};
use nalgebra::{DMatrix, DVector};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TransformError {
    #[error("displacement gradient norm {norm:e} exceeds delta = {delta}")]
    DeltaViolation { norm: f64, delta: f64 },
    #[error("I + grad psi is near singular (det = {0:e})")]
    NearSingular(f64),
    #[error("FD stencil leaves the domain (|y| + h = {reach} > {radius})")]
    StencilOutOfDomain { reach: f64, radius: f64 },
    #[error("pushed-forward normal degenerates (|.| = {0:e})")]
    DegenerateNormal(f64),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

type ValueFn = Arc<dyn Fn(&[f64], f64) -> DVector<f64> + Send + Sync>;
type GradFn = Arc<dyn Fn(&[f64], f64) -> DMatrix<f64> + Send + Sync>;
type HessFn = Arc<dyn Fn(&[f64], f64) -> Vec<DMatrix<f64>> + Send + Sync>;

/// A time-dependent vector field on R^N with its spatial gradient and,
/// optionally, analytic second derivatives and time derivative.
#[derive(Clone)]
pub struct VectorField {
    pub dim: usize,
    value: ValueFn,
    grad: GradFn,
    hess: Option<HessFn>,
    dt: Option<ValueFn>,
    /// Length scale for finite-difference steps (step = 1e−4 × scale).
    pub scale: f64,
}

impl std::fmt::Debug for VectorField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("VectorField").field("dim", &self.dim).field("scale", &self.scale).finish()
    }
}

impl VectorField {
    pub fn new<V, G>(dim: usize, value: V, grad: G) -> Self
    where
        V: Fn(&[f64], f64) -> DVector<f64> + Send + Sync + 'static,
        G: Fn(&[f64], f64) -> DMatrix<f64> + Send + Sync + 'static,
    {
        Self {
            dim,
            value: Arc::new(value),
            grad: Arc::new(grad),
            hess: None,
            dt: None,
            scale: 1.0,
        }
    }

    /// hess[l][(i, j)] = ∂_l∂_i F_j.
    pub fn with_hess<H>(mut self, hess: H) -> Self
    where
        H: Fn(&[f64], f64) -> Vec<DMatrix<f64>> + Send + Sync + 'static,
    {
        self.hess = Some(Arc::new(hess));
        self
    }

    pub fn with_dt<D>(mut self, dt: D) -> Self
    where
        D: Fn(&[f64], f64) -> DVector<f64> + Send + Sync + 'static,
    {
        self.dt = Some(Arc::new(dt));
        self
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn zero(dim: usize) -> Self {
        Self::affine(DMatrix::zeros(dim, dim), DVector::zeros(dim))
    }

    /// F(y) = Kᵀ y + b, so that grad F = K in the row-derivative layout.
    pub fn affine(k: DMatrix<f64>, b: DVector<f64>) -> Self {
        let dim = b.len();
        let (k1, k2) = (k.clone(), k);
        Self::new(dim, move |y, _| k1.transpose() * DVector::from_column_slice(y) + &b, move |_, _| k2.clone())
            .with_hess(move |_, _| vec![DMatrix::zeros(dim, dim); dim])
            .with_dt(move |_, _| DVector::zeros(dim))
    }

    pub fn value(&self, y: &[f64], t: f64) -> DVector<f64> {
        (self.value)(y, t)
    }

    pub fn grad(&self, y: &[f64], t: f64) -> DMatrix<f64> {
        (self.grad)(y, t)
    }

    pub fn has_analytic_hess(&self) -> bool {
        self.hess.is_some()
    }

    /// Second derivatives, by central differences of the gradient when no
    /// analytic evaluator was supplied.
    pub fn hess(&self, y: &[f64], t: f64) -> Vec<DMatrix<f64>> {
        if let Some(h) = &self.hess {
            return h(y, t);
        }
        let h = 1e-4 * self.scale;
        (0..self.dim)
            .map(|l| {
                let mut a = y.to_vec();
                let mut b = y.to_vec();
                a[l] += h;
                b[l] -= h;
                (self.grad(&a, t) - self.grad(&b, t)) / (2.0 * h)
            })
            .collect()
    }

    /// Time derivative; a field without one is steady.
    pub fn dt(&self, y: &[f64], t: f64) -> DVector<f64> {
        match &self.dt {
            Some(d) => d(y, t),
            None => DVector::zeros(self.dim),
        }
    }

    pub fn divergence(&self, y: &[f64], t: f64) -> f64 {
        self.grad(y, t).trace()
    }

    /// Steady smooth test field F_j = Σ_k a_jk sin(b_k·y + c_jk) with
    /// analytic gradient and Hessian. a ~ amp·U(−1, 1), b ~ U(−1.5, 1.5),
    /// c ~ U(0, 6), all drawn from stream 11 of `seed`.
    pub fn trigonometric(seed: u64, dim: usize, amp: f64) -> Self {
        use rand::Rng;
        let mut r = crate::rng::stream(seed, 11);
        let b: Vec<Vec<f64>> = (0..dim).map(|_| (0..dim).map(|_| r.gen_range(-1.5..1.5)).collect()).collect();
        let a: Vec<Vec<f64>> = (0..dim).map(|_| (0..dim).map(|_| amp * r.gen_range(-1.0..1.0)).collect()).collect();
        let c: Vec<Vec<f64>> = (0..dim).map(|_| (0..dim).map(|_| r.gen_range(0.0..6.0)).collect()).collect();
        let coef = Arc::new((a, b, c));
        let phase = |co: &(Vec<Vec<f64>>, Vec<Vec<f64>>, Vec<Vec<f64>>), y: &[f64], j: usize, k: usize| {
            co.1[k].iter().zip(y).map(|(p, q)| p * q).sum::<f64>() + co.2[j][k]
        };
        let (c1, c2, c3) = (coef.clone(), coef.clone(), coef);
        Self::new(
            dim,
            move |y, _| DVector::from_fn(dim, |j, _| (0..dim).map(|k| c1.0[j][k] * phase(&c1, y, j, k).sin()).sum()),
            move |y, _| {
                DMatrix::from_fn(dim, dim, |i, j| (0..dim).map(|k| c2.0[j][k] * c2.1[k][i] * phase(&c2, y, j, k).cos()).sum())
            },
        )
        .with_hess(move |y, _| {
            (0..dim)
                .map(|l| {
                    DMatrix::from_fn(dim, dim, |i, j| {
                        (0..dim).map(|k| -c3.0[j][k] * c3.1[k][i] * c3.1[k][l] * phase(&c3, y, j, k).sin()).sum()
                    })
                })
                .collect()
        })
    }
}

/// Ψ together with the smallness bound δ on its gradient.
#[derive(Debug, Clone)]
pub struct DisplacementField {
    pub field: VectorField,
    pub delta_bound: f64,
    /// Radius of the ball on which Ψ is defined; `None` means all of R^N.
    pub domain_radius: Option<f64>,
}

impl DisplacementField {
    pub fn new(field: VectorField, delta_bound: f64) -> Self {
        Self {
            field,
            delta_bound,
            domain_radius: None,
        }
    }

    pub fn on_ball(mut self, radius: f64) -> Self {
        self.domain_radius = Some(radius);
        self
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(VectorField::zero(dim), 0.5)
    }

    pub fn dim(&self) -> usize {
        self.field.dim
    }

    /// ∇Ψ at (y, t) after checking ‖∇Ψ‖₂ ≤ δ.
    pub fn checked_grad(&self, y: &[f64], t: f64) -> Result<DMatrix<f64>, TransformError> {
        let k = self.field.grad(y, t);
        let norm = k.clone().svd(false, false).singular_values.max();
        if norm > self.delta_bound {
            return Err(TransformError::DeltaViolation {
                norm,
                delta: self.delta_bound,
            });
        }
        Ok(k)
    }

    pub fn state(&self, y: &[f64], t: f64) -> Result<TransformState, TransformError> {
        compute_v0_j(&self.checked_grad(y, t)?)
    }
}

/// Ψ(y) = ρ(ŷ)|y|y/R² on B_R ⊂ R³, which equals ρω on S_R and is C¹ at 0.
/// `rho` is a star-shaped height r − R given as a spherical graph.
pub fn ball_displacement(rho: SphericalGraph, radius: f64, delta_bound: f64) -> DisplacementField {
    let r2 = radius * radius;
    let (rv, rg) = (rho.clone(), rho);
    let value = move |y: &[f64], _t: f64| {
        let s = norm(y);
        if s == 0.0 {
            return DVector::zeros(3);
        }
        let (theta, phi) = angles(y);
        DVector::from_column_slice(y) * (rv.radius(phi, theta).v * s / r2)
    };
    let grad = move |y: &[f64], _t: f64| {
        let s = norm(y);
        if s == 0.0 {
            return DMatrix::zeros(3, 3);
        }
        let (theta, phi) = angles(y);
        let j = rg.radius(phi, theta);
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        let e_t = [cp * ct, sp * ct, -st];
        let e_p = [-sp, cp, 0.0];
        let surf_grad: Vec<f64> = (0..3).map(|i| j.t * e_t[i] + j.p / st * e_p[i]).collect();
        DMatrix::from_fn(3, 3, |i, k| {
            let delta = if i == k { 1.0 } else { 0.0 };
            (surf_grad[i] * y[k] + j.v * (y[i] / s * y[k] + s * delta)) / r2
        })
    };
    DisplacementField::new(VectorField::new(3, value, grad).with_scale(radius), delta_bound).on_ball(radius)
}

fn norm(y: &[f64]) -> f64 {
    y.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// (θ, φ) of a nonzero point in R³.
pub fn angles(y: &[f64]) -> (f64, f64) {
    let s = norm(y);
    ((y[2] / s).clamp(-1.0, 1.0).acos(), y[1].atan2(y[0]).rem_euclid(2.0 * std::f64::consts::PI))
}

/// K, V0 = (I + K)⁻¹ − I and J = det(I + K) at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformState {
    pub grad_psi: DMatrix<f64>,
    pub v0: DMatrix<f64>,
    pub j: f64,
    pub j0: f64,
}

impl TransformState {
    /// max |(I + K)(I + V0) − I|
    pub fn inverse_residual(&self) -> f64 {
        let n = self.v0.nrows();
        let id = DMatrix::<f64>::identity(n, n);
        ((&id + &self.grad_psi) * (&id + &self.v0) - id).abs().max()
    }
}

pub fn compute_v0_j(grad_psi: &DMatrix<f64>) -> Result<TransformState, TransformError> {
    let n = grad_psi.nrows();
    let a = DMatrix::<f64>::identity(n, n) + grad_psi;
    let j = a.determinant();
    if j.abs() < 1e-12 {
        return Err(TransformError::NearSingular(j));
    }
    let inv = a.try_inverse().ok_or(TransformError::NearSingular(j))?;
    Ok(TransformState {
        grad_psi: grad_psi.clone(),
        v0: inv - DMatrix::identity(n, n),
        j,
        j0: j - 1.0,
    })
}

/// V0 = Σ_{k≥1} (−K)^k, summed until the terms drop below 1e−17.
pub fn v0_neumann(grad_psi: &DMatrix<f64>) -> DMatrix<f64> {
    let minus = -grad_psi;
    let mut term = minus.clone();
    let mut sum = term.clone();
    for _ in 0..500 {
        term = &term * &minus;
        sum += &term;
        if term.abs().max() < 1e-17 {
            break;
        }
    }
    sum
}

/// x = y + Ψ(y, t) + ξ(t).
pub fn hanzawa_map(field: &DisplacementField, xi_t: &[f64], y: &[f64], t: f64) -> Result<DVector<f64>, TransformError> {
    field.checked_grad(y, t)?;
    Ok(DVector::from_column_slice(y) + field.field.value(y, t) + DVector::from_column_slice(xi_t))
}

#[derive(Debug, Clone, PartialEq)]
pub struct InjectivityWitness {
    /// min |x₁ − x₂| / |y₁ − y₂| over the sampled pairs.
    pub min_ratio: f64,
    /// 1 − δ
    pub bound: f64,
    /// Largest ‖∇Ψ‖₂ met on the sampled segments.
    pub max_grad_norm: f64,
}

impl InjectivityWitness {
    pub fn holds(&self) -> bool {
        self.min_ratio >= self.bound
    }
}

/// Samples |x₁ − x₂| ≥ (1 − δ)|y₁ − y₂| over the given pairs, checking δ
/// along each connecting segment.
pub fn injectivity_witness(
    field: &DisplacementField,
    xi_t: &[f64],
    pairs: &[(Vec<f64>, Vec<f64>)],
    t: f64,
) -> Result<InjectivityWitness, TransformError> {
    let mut min_ratio = f64::INFINITY;
    let mut max_grad_norm: f64 = 0.0;
    for (y1, y2) in pairs {
        for k in 0..=8 {
            let s = k as f64 / 8.0;
            let y: Vec<f64> = y1.iter().zip(y2).map(|(a, b)| a + s * (b - a)).collect();
            let g = field.checked_grad(&y, t)?;
            max_grad_norm = max_grad_norm.max(g.svd(false, false).singular_values.max());
        }
        let dy = norm(&y1.iter().zip(y2).map(|(a, b)| a - b).collect::<Vec<_>>());
        if dy == 0.0 {
            continue;
        }
        let dx = (hanzawa_map(field, xi_t, y1, t)? - hanzawa_map(field, xi_t, y2, t)?).norm();
        min_ratio = min_ratio.min(dx / dy);
    }
    Ok(InjectivityWitness {
        min_ratio,
        bound: 1.0 - field.delta_bound,
        max_grad_norm,
    })
}

/// κ(y) = χ(|y|/R) and its gradient.
pub fn kappa(y: &[f64], radius: f64) -> (f64, DVector<f64>) {
    let s = norm(y);
    let v = cutoff(s / radius);
    let d = if s == 0.0 { 0.0 } else { cutoff_derivative(s / radius) / (radius * s) };
    (v, DVector::from_fn(y.len(), |i, _| d * y[i]))
}

/// Composite trapezoid weights on the snapshot times.
fn trapezoid_weights(times: &[f64]) -> Vec<f64> {
    let n = times.len();
    let mut w = vec![0.0; n];
    for k in 1..n {
        let h = times[k] - times[k - 1];
        w[k - 1] += 0.5 * h;
        w[k] += 0.5 * h;
    }
    w
}

/// Ψ(y, t) = ∫₀ᵗ κ(y) u(y, s) ds by the trapezoid rule over the snapshot
/// times `times` (first entry 0, last entry t). ∂_tΨ = κ u at the final time.
pub fn partial_lagrange_displacement(
    u: &VectorField,
    radius: f64,
    times: &[f64],
    delta_bound: f64,
) -> DisplacementField {
    let w = trapezoid_weights(times);
    let t_end = times.last().copied().unwrap_or(0.0);
    let dim = u.dim;
    let (u1, u2, u3) = (u.clone(), u.clone(), u.clone());
    let (ts1, ts2) = (times.to_vec(), times.to_vec());
    let (w1, w2) = (w.clone(), w);
    let value = move |y: &[f64], _t: f64| {
        let (k, _) = kappa(y, radius);
        ts1.iter().zip(&w1).fold(DVector::zeros(dim), |acc, (s, wk)| acc + u1.value(y, *s) * (wk * k))
    };
    let grad = move |y: &[f64], _t: f64| {
        let (k, dk) = kappa(y, radius);
        ts2.iter().zip(&w2).fold(DMatrix::zeros(dim, dim), |acc, (s, wk)| {
            let uv = u2.value(y, *s);
            acc + (&dk * uv.transpose() + u2.grad(y, *s) * k) * *wk
        })
    };
    let dt = move |y: &[f64], _t: f64| u3.value(y, t_end) * kappa(y, radius).0;
    DisplacementField::new(VectorField::new(dim, value, grad).with_dt(dt).with_scale(radius), delta_bound)
}

/// x = y + ∫₀ᵗ κ(y) u(y, s) ds. Checks the sampled H¹_∞ budget
/// Σ_k w_k (|κu| + ‖∇(κu)‖₂)(y, t_k) ≤ δ.
pub fn partial_lagrange_map(
    u: &VectorField,
    radius: f64,
    times: &[f64],
    delta_bound: f64,
    y: &[f64],
) -> Result<DVector<f64>, TransformError> {
    let (k, dk) = kappa(y, radius);
    if k == 0.0 && dk.norm() == 0.0 {
        return Ok(DVector::from_column_slice(y));
    }
    let w = trapezoid_weights(times);
    let budget: f64 = times
        .iter()
        .zip(&w)
        .map(|(s, wk)| {
            let uv = u.value(y, *s);
            let g = &dk * uv.transpose() + u.grad(y, *s) * k;
            wk * ((&uv * k).norm() + g.svd(false, false).singular_values.max())
        })
        .sum();
    if budget > delta_bound {
        return Err(TransformError::DeltaViolation {
            norm: budget,
            delta: delta_bound,
        });
    }
    let psi = partial_lagrange_displacement(u, radius, times, delta_bound);
    Ok(DVector::from_column_slice(y) + psi.field.value(y, 0.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceForms {
    /// div u + V0 : ∇u
    pub form_a: f64,
    /// J⁻¹(div(J u) + div(J V0ᵀ u)), differenced with step h.
    pub form_b: f64,
}

/// div_x v expressed in y two ways. form_b is the conservative form; with
/// V0ᵀu meaning (V0ᵀu)_k = Σ_j V0_jk u_j.
pub fn transformed_divergence(
    u: &VectorField,
    psi: &DisplacementField,
    y: &[f64],
    t: f64,
    h: f64,
) -> Result<DivergenceForms, TransformError> {
    if let Some(radius) = psi.domain_radius {
        let reach = norm(y) + h;
        if reach > radius {
            return Err(TransformError::StencilOutOfDomain { reach, radius });
        }
    }
    let state = psi.state(y, t)?;
    let gu = u.grad(y, t);
    let form_a = gu.trace() + state.v0.component_mul(&gu.transpose()).sum();
    let flux = |q: &[f64]| -> Result<DVector<f64>, TransformError> {
        let s = psi.state(q, t)?;
        let uv = u.value(q, t);
        Ok((&uv + s.v0.transpose() * &uv) * s.j)
    };
    let mut div = 0.0;
    for k in 0..y.len() {
        let mut a = y.to_vec();
        let mut b = y.to_vec();
        a[k] += h;
        b[k] -= h;
        div += (flux(&a)?[k] - flux(&b)?[k]) / (2.0 * h);
    }
    Ok(DivergenceForms {
        form_a,
        form_b: div / state.j,
    })
}

/// n_t = (I + V0) n / |(I + V0) n|, the unit normal carried by the map.
pub fn pushforward_normal(state: &TransformState, n: &DVector<f64>) -> Result<DVector<f64>, TransformError> {
    let m = n + &state.v0 * n;
    let len = m.norm();
    if len < 1e-14 {
        return Err(TransformError::DegenerateNormal(len));
    }
    Ok(m / len)
}

/// n − Σ g^{ij} τ_i ∂_jρ, the first-order pushed-forward normal for a
/// height ρ along the chart normal. `drho` holds ∂_jρ in chart coordinates.
pub fn linearized_normal(patch: &SurfacePatch, p: &[f64], drho: &[f64]) -> Result<DVector<f64>, TransformError> {
    let geo = geometry_at(patch, p)?;
    let m = geo.tau.len();
    let mut v = geo.n.clone();
    for i in 0..m {
        for j in 0..m {
            v -= &geo.tau[i] * (geo.g_inv[(i, j)] * drho[j]);
        }
    }
    Ok(v)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReynoldsRecord {
    /// (Δt, |central-difference dJ/dt − (div_x w) J|)
    pub rows: Vec<(f64, f64)>,
    /// Least-squares slope of log error against log Δt; `None` when all
    /// errors are at round-off (the difference quotient is exact).
    pub order: Option<f64>,
    /// |J tr((I+K)⁻¹∇w) − (div_x w) J| with K = t∇w, i.e. Jacobi's formula
    /// against the transported divergence; exact up to round-off.
    pub jacobi_residual: f64,
}

impl ReynoldsRecord {
    pub fn exact(&self) -> bool {
        self.order.is_none()
    }
}

/// ∂_tJ = (div_x w) J for the flow y ↦ y + t w(y).
pub fn reynolds_transport_check(w: &VectorField, y: &[f64], t: f64, dt_list: &[f64]) -> Result<ReynoldsRecord, TransformError> {
    let gw = w.grad(y, 0.0);
    let jac = |s: f64| compute_v0_j(&(&gw * s));
    let state = jac(t)?;
    // Eulerian divergence at x = y + t w(y): Σ_ij (δ_ij + V0_ij) ∂_j w_i.
    let n = y.len();
    let div_x = ((DMatrix::<f64>::identity(n, n) + &state.v0) * &gw).trace();
    let rhs = div_x * state.j;
    let jacobi = state.j * ((DMatrix::<f64>::identity(n, n) + &state.v0) * &gw).trace();
    let mut rows = Vec::new();
    for &dt in dt_list {
        let fd = (jac(t + dt)?.j - jac(t - dt)?.j) / (2.0 * dt);
        rows.push((dt, (fd - rhs).abs()));
    }
    let scale = rhs.abs().max(1.0);
    let order = if rows.iter().all(|r| r.1 <= 1e-13 * scale) { None } else { Some(fitted_order(&rows)) };
    Ok(ReynoldsRecord {
        rows,
        order,
        jacobi_residual: (jacobi - rhs).abs(),
    })
}

/// Least-squares slope of log(err) against log(step).
pub fn fitted_order(rows: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.1 > 0.0)
        .map(|r| (r.0.ln(), r.1.ln()))
        .collect();
    let n = pts.len() as f64;
    if n < 2.0 {
        return f64::NAN;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaDerivative {
    /// Central difference of the quadrature area.
    pub lhs: f64,
    /// −∫ H ⟨n, ∂_tφ⟩ dω
    pub rhs: f64,
    pub residual: f64,
}

/// d|Γ_t|/dt = −∫ H⟨n, ∂_tφ⟩ for a family of closed charts t ↦ Γ_t,
/// integrated with the parameter rule `rule` (weights for dθ dφ or dt).
pub fn area_derivative_check<F>(family: F, rule: &[(Vec<f64>, f64)], t: f64, dt: f64) -> Result<AreaDerivative, TransformError>
where
    F: Fn(f64) -> SurfacePatch,
{
    let area = |s: f64| -> Result<f64, TransformError> {
        let patch = family(s);
        let mut a = 0.0;
        for (p, w) in rule {
            a += w * geometry_at(&patch, p)?.g_det.sqrt();
        }
        Ok(a)
    };
    let lhs = (area(t + dt)? - area(t - dt)?) / (2.0 * dt);
    let (now, plus, minus) = (family(t), family(t + dt), family(t - dt));
    let mut rhs = 0.0;
    for (p, w) in rule {
        let geo = geometry_at(&now, p)?;
        let h = mean_curvature(&now, p)?.h_trace;
        let vel = (plus.phi(p) - minus.phi(p)) / (2.0 * dt);
        rhs -= w * geo.g_det.sqrt() * h * geo.n.dot(&vel);
    }
    Ok(AreaDerivative {
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
    })
}

/// t ↦ sphere of radius R0 + speed·t in R^N (N = 2, 3).
pub fn moving_sphere(r0: f64, speed: f64, dim: usize) -> impl Fn(f64) -> SurfacePatch {
    move |t| crate::geometry::sphere_patch(r0 + speed * t, dim).expect("dimension 2 or 3")
}
