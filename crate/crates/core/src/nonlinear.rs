//! Nonlinear terms of the Stokes system pulled back to a fixed reference
//! domain: f (momentum), g and gvec (divergence), h′ and h_N (stress
//! boundary condition on a sphere), h (partial-Lagrange boundary term) and
//! d (kinematic condition).
//!
//! The interior terms are assembled by the displayed index sums in any
//! numeric ring, so the same code runs in f64 and in exact rationals.
//! Conventions follow [`crate::transforms`]: K_ij = ∂_iΨ_j, grad u has
//! entries ∂_i u_j, and V0 = (I + K)⁻¹ − I.

use crate::geometry::{
    geometry_at, laplace_beltrami_at, spherical_graph_mean_curvature, GeometryAtPoint, GeometryError,
    SphericalGraph,
};
use crate::quadrature::BallRule;
use crate::transforms::{compute_v0_j, pushforward_normal, DisplacementField, TransformError, TransformState, VectorField};
use nalgebra::{DMatrix, DVector};
use std::fmt::Debug;
use std::ops::Neg;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NonlinearError {
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("ball quadrature under-resolved: relative volume error {0:e}")]
    UnderResolved(f64),
    #[error("boundary terms are implemented for the sphere in R^3 only (got N = {0})")]
    UnsupportedSurface(usize),
}

/// Scalars the interior assembly runs in (f64, exact rationals).
pub trait Ring: num_traits::Num + Clone + Neg<Output = Self> + Debug {}
impl<T: num_traits::Num + Clone + Neg<Output = T> + Debug> Ring for T {}

pub type Mat<T> = Vec<Vec<T>>;

/// Pointwise data the interior terms depend on.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowJet<T> {
    pub u: Vec<T>,
    /// grad_u[i][j] = ∂_i u_j
    pub grad_u: Mat<T>,
    /// hess_u[l][i][j] = ∂_l ∂_i u_j
    pub hess_u: Vec<Mat<T>>,
    pub dt_u: Vec<T>,
    /// k[i][j] = ∂_i Ψ_j
    pub k: Mat<T>,
    /// dk[l][i][j] = ∂_l ∂_i Ψ_j
    pub dk: Vec<Mat<T>>,
    pub dt_psi: Vec<T>,
    /// (I + K)⁻¹ − I
    pub v0: Mat<T>,
    /// det(I + K)
    pub j: T,
    pub rho_density: T,
    pub mu: T,
}

/// Which velocity carries the transport block of f.
#[derive(Debug, Clone, PartialEq)]
pub enum Transport<T> {
    /// u − ∂_tΨ
    Hanzawa,
    /// (1 − κ) u, with ∂_tΨ = κu built into the map.
    PartialLagrange { kappa: T },
}

fn zeros<T: Ring>(n: usize) -> Mat<T> {
    vec![vec![T::zero(); n]; n]
}

fn mat_mul<T: Ring>(a: &Mat<T>, b: &Mat<T>) -> Mat<T> {
    let n = a.len();
    let mut c = zeros(n);
    for i in 0..n {
        for j in 0..n {
            let mut s = T::zero();
            for k in 0..n {
                s = s + a[i][k].clone() * b[k][j].clone();
            }
            c[i][j] = s;
        }
    }
    c
}

fn plus_identity<T: Ring>(a: &Mat<T>) -> Mat<T> {
    let mut c = a.clone();
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = row[i].clone() + T::one();
    }
    c
}

impl<T: Ring> FlowJet<T> {
    pub fn dim(&self) -> usize {
        self.u.len()
    }

    /// ∂_l V0 = −(I + V0) ∂_l K (I + V0).
    pub fn dv0(&self) -> Vec<Mat<T>> {
        let a = plus_identity(&self.v0);
        self.dk
            .iter()
            .map(|d| mat_mul(&mat_mul(&a, d), &a).into_iter().map(|r| r.into_iter().map(|v| -v).collect()).collect())
            .collect()
    }

    /// D(u)_ij = ∂_j u_i + ∂_i u_j
    pub fn strain(&self) -> Mat<T> {
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|j| self.grad_u[j][i].clone() + self.grad_u[i][j].clone()).collect())
            .collect()
    }

    /// (𝓓_D(k)∇u)_ij = Σ_k V0_jk ∂_k u_i + V0_ik ∂_k u_j
    pub fn strain_correction(&self) -> Mat<T> {
        let n = self.dim();
        let mut c = zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut s = T::zero();
                for k in 0..n {
                    s = s + self.v0[j][k].clone() * self.grad_u[k][i].clone()
                        + self.v0[i][k].clone() * self.grad_u[k][j].clone();
                }
                c[i][j] = s;
            }
        }
        c
    }
}

/// f(u, Ψ) by its index sums.
pub fn f_terms<T: Ring>(jet: &FlowJet<T>, transport: &Transport<T>) -> Vec<T> {
    let n = jet.dim();
    let a = plus_identity(&jet.v0);
    let dv0 = jet.dv0();
    let w: Vec<T> = match transport {
        Transport::Hanzawa => (0..n).map(|j| jet.u[j].clone() - jet.dt_psi[j].clone()).collect(),
        Transport::PartialLagrange { kappa } => {
            jet.u.iter().map(|v| (T::one() - kappa.clone()) * v.clone()).collect()
        }
    };
    // conv_i = Σ_jk w_j (δ_jk + V0_jk) ∂_k u_i
    let conv: Vec<T> = (0..n)
        .map(|i| {
            let mut s = T::zero();
            for j in 0..n {
                for k in 0..n {
                    s = s + w[j].clone() * a[j][k].clone() * jet.grad_u[k][i].clone();
                }
            }
            s
        })
        .collect();
    // ∂_m of D(u) and of the correction 𝓓, then E = D + 𝓓.
    let d_strain: Vec<Mat<T>> = (0..n)
        .map(|m| {
            (0..n)
                .map(|i| (0..n).map(|j| jet.hess_u[m][j][i].clone() + jet.hess_u[m][i][j].clone()).collect())
                .collect()
        })
        .collect();
    let d_corr: Vec<Mat<T>> = (0..n)
        .map(|m| {
            let mut c = zeros(n);
            for i in 0..n {
                for j in 0..n {
                    let mut s = T::zero();
                    for k in 0..n {
                        s = s + dv0[m][j][k].clone() * jet.grad_u[k][i].clone()
                            + jet.v0[j][k].clone() * jet.hess_u[m][k][i].clone()
                            + dv0[m][i][k].clone() * jet.grad_u[k][j].clone()
                            + jet.v0[i][k].clone() * jet.hess_u[m][k][j].clone();
                    }
                    c[i][j] = s;
                }
            }
            c
        })
        .collect();
    let d_e: Vec<Mat<T>> = (0..n)
        .map(|m| {
            (0..n)
                .map(|i| (0..n).map(|j| d_strain[m][i][j].clone() + d_corr[m][i][j].clone()).collect())
                .collect()
        })
        .collect();

    (0..n)
        .map(|i| {
            let rho = jet.rho_density.clone();
            let mut f = -(rho.clone() * conv[i].clone());
            for l in 0..n {
                f = f - rho.clone() * jet.k[i][l].clone() * (jet.dt_u[l].clone() + conv[l].clone());
            }
            let mut visc = T::zero();
            for j in 0..n {
                visc = visc + d_corr[j][i][j].clone();
                for k in 0..n {
                    visc = visc + jet.v0[j][k].clone() * d_e[k][i][j].clone();
                    for l in 0..n {
                        visc = visc + jet.k[i][l].clone() * a[j][k].clone() * d_e[k][l][j].clone();
                    }
                }
            }
            f + jet.mu.clone() * visc
        })
        .collect()
}

/// (g, gvec) with g = −(J0 div u + J V0:∇u) and gvec = −(J0 u + J V0ᵀu),
/// so that div gvec = g.
pub fn g_terms<T: Ring>(jet: &FlowJet<T>) -> (T, Vec<T>) {
    let n = jet.dim();
    let j0 = jet.j.clone() - T::one();
    let mut div = T::zero();
    let mut contraction = T::zero();
    for j in 0..n {
        div = div + jet.grad_u[j][j].clone();
        for k in 0..n {
            contraction = contraction + jet.v0[j][k].clone() * jet.grad_u[k][j].clone();
        }
    }
    let g = -(j0.clone() * div + jet.j.clone() * contraction);
    let gvec = (0..n)
        .map(|k| {
            let mut s = T::zero();
            for j in 0..n {
                s = s + jet.v0[j][k].clone() * jet.u[j].clone();
            }
            -(j0.clone() * jet.u[k].clone() + jet.j.clone() * s)
        })
        .collect();
    (g, gvec)
}

fn to_mat(m: &DMatrix<f64>) -> Mat<f64> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

fn from_mat(m: &Mat<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(m.len(), m.len(), |i, j| m[i][j])
}

/// Velocity, displacement and coefficients.
#[derive(Debug, Clone)]
pub struct FlowState {
    pub u: VectorField,
    pub psi: DisplacementField,
    pub mu: f64,
    /// Mass density; 1 unless the ρ-weighted forms are wanted.
    pub rho_density: f64,
}

impl FlowState {
    pub fn new(u: VectorField, psi: DisplacementField, mu: f64) -> Self {
        Self {
            u,
            psi,
            mu,
            rho_density: 1.0,
        }
    }

    pub fn with_density(mut self, rho: f64) -> Self {
        self.rho_density = rho;
        self
    }

    pub fn jet(&self, y: &[f64], t: f64) -> Result<FlowJet<f64>, NonlinearError> {
        let state = self.psi.state(y, t)?;
        Ok(FlowJet {
            u: self.u.value(y, t).as_slice().to_vec(),
            grad_u: to_mat(&self.u.grad(y, t)),
            hess_u: self.u.hess(y, t).iter().map(to_mat).collect(),
            dt_u: self.u.dt(y, t).as_slice().to_vec(),
            k: to_mat(&state.grad_psi),
            dk: self.psi.field.hess(y, t).iter().map(to_mat).collect(),
            dt_psi: self.psi.field.dt(y, t).as_slice().to_vec(),
            v0: to_mat(&state.v0),
            j: state.j,
            rho_density: self.rho_density,
            mu: self.mu,
        })
    }
}

pub fn transform_state(jet: &FlowJet<f64>) -> TransformState {
    TransformState {
        grad_psi: from_mat(&jet.k),
        v0: from_mat(&jet.v0),
        j: jet.j,
        j0: jet.j - 1.0,
    }
}

pub fn assemble_f(state: &FlowState, y: &[f64], t: f64) -> Result<DVector<f64>, NonlinearError> {
    Ok(DVector::from_vec(f_terms(&state.jet(y, t)?, &Transport::Hanzawa)))
}

/// Partial-Lagrange f: the transport block carries (1 − κ(y)).
pub fn assemble_f_partial_lagrange(
    state: &FlowState,
    kappa_radius: f64,
    y: &[f64],
    t: f64,
) -> Result<DVector<f64>, NonlinearError> {
    let kappa = crate::transforms::kappa(y, kappa_radius).0;
    Ok(DVector::from_vec(f_terms(&state.jet(y, t)?, &Transport::PartialLagrange { kappa })))
}

pub fn assemble_g_gvec(state: &FlowState, y: &[f64], t: f64) -> Result<(f64, DVector<f64>), NonlinearError> {
    let (g, gvec) = g_terms(&state.jet(y, t)?);
    Ok((g, DVector::from_vec(gvec)))
}

/// D(u) and 𝓓 as matrices.
pub fn strain_matrices(jet: &FlowJet<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    (from_mat(&jet.strain()), from_mat(&jet.strain_correction()))
}

/// Geometry of the reference sphere S_R at ω(θ, φ) together with the
/// height ρ of the perturbed surface |x| = R + ρ(ω).
#[derive(Debug, Clone)]
pub struct SphereBoundary {
    pub radius: f64,
    pub theta: f64,
    pub phi: f64,
    /// The point Rω on S_R.
    pub y: DVector<f64>,
    pub geo: GeometryAtPoint,
    pub rho: f64,
    /// (∂_θρ, ∂_φρ)
    pub drho: [f64; 2],
    /// 𝓑ρ = Δ_{S_R}ρ + 2ρ/R²
    pub b_rho: f64,
    /// Mean curvature of the perturbed surface at (R + ρ)ω.
    pub h_perturbed: f64,
}

pub fn sphere_boundary(height: &SphericalGraph, radius: f64, theta: f64, phi: f64) -> Result<SphereBoundary, NonlinearError> {
    let sphere = SphericalGraph::sphere(radius).patch();
    let geo = geometry_at(&sphere, &[theta, phi])?;
    let j = height.radius(phi, theta);
    let b_rho = laplace_beltrami_at(&geo, &j.to_scalar_jet()) + 2.0 * j.v / (radius * radius);
    let h2 = height.clone();
    let perturbed = SphericalGraph::new(move |p, t| {
        let mut r = h2.radius(p, t);
        r.v += radius;
        r
    });
    let h_perturbed = spherical_graph_mean_curvature(&perturbed, phi, theta)?;
    Ok(SphereBoundary {
        radius,
        theta,
        phi,
        y: geo.jet.x.clone(),
        rho: j.v,
        drho: [j.t, j.p],
        b_rho,
        h_perturbed,
        geo,
    })
}

impl SphereBoundary {
    pub fn normal(&self) -> &DVector<f64> {
        &self.geo.n
    }

    /// Σ g^{ij} τ_i ∂_jρ
    pub fn surface_gradient(&self) -> DVector<f64> {
        let mut v = DVector::zeros(3);
        for i in 0..2 {
            for j in 0..2 {
                v += &self.geo.tau[i] * (self.geo.g_inv[(i, j)] * self.drho[j]);
            }
        }
        v
    }

    /// ⟨d | ∇′ρ⟩ = Σ g^{ij} ⟨τ_i, d⟩ ∂_jρ
    pub fn pairing(&self, d: &DVector<f64>) -> f64 {
        self.surface_gradient().dot(d)
    }
}

fn projector(n: &DVector<f64>) -> DMatrix<f64> {
    DMatrix::identity(n.len(), n.len()) - n * n.transpose()
}

fn check_sphere(jet: &FlowJet<f64>) -> Result<(), NonlinearError> {
    if jet.dim() != 3 {
        return Err(NonlinearError::UnsupportedSurface(jet.dim()));
    }
    Ok(())
}

/// The pushed-forward normal n_t at the boundary point.
pub fn transported_normal(jet: &FlowJet<f64>, boundary: &SphereBoundary) -> Result<DVector<f64>, NonlinearError> {
    Ok(pushforward_normal(&transform_state(jet), boundary.normal())?)
}

/// h′ = −μ Π₀ {𝓓 n_t + D(u)(n_t − n) − ⟨(D(u) + 𝓓) n_t, n_t⟩ (n_t − n)},
/// Π₀ = I − n nᵀ. Tangential by construction.
pub fn assemble_hprime(jet: &FlowJet<f64>, boundary: &SphereBoundary) -> Result<DVector<f64>, NonlinearError> {
    check_sphere(jet)?;
    let n = boundary.normal();
    let nt = transported_normal(jet, boundary)?;
    let (d, dd) = strain_matrices(jet);
    let dn = &nt - n;
    let normal_stress = ((&d + &dd) * &nt).dot(&nt);
    let inner = &dd * &nt + &d * &dn - &dn * normal_stress;
    Ok(projector(n) * inner * (-jet.mu))
}

/// Part of h′ linear in Ψ: V0 → −K in 𝓓 and n_t − n → −Σ g^{ij} τ_i ∂_jρ.
pub fn assemble_hprime_linear(jet: &FlowJet<f64>, boundary: &SphereBoundary) -> Result<DVector<f64>, NonlinearError> {
    check_sphere(jet)?;
    let n = boundary.normal();
    let mut lin = jet.clone();
    lin.v0 = jet.k.iter().map(|r| r.iter().map(|v| -v).collect()).collect();
    let (d, dd) = strain_matrices(&lin);
    let dn = -boundary.surface_gradient();
    let inner = &dd * n + &d * &dn - &dn * (&d * n).dot(n);
    Ok(projector(n) * inner * (-jet.mu))
}

/// Normal stress remainder: μ⟨D(u)n, n⟩ − μ⟨(D(u) + 𝓓) n_t, n_t⟩ +
/// σ(H(Γ_t) + 2/R − 𝓑ρ), the last bracket being the curvature remainder.
pub fn assemble_hn(jet: &FlowJet<f64>, boundary: &SphereBoundary, sigma: f64) -> Result<f64, NonlinearError> {
    check_sphere(jet)?;
    let n = boundary.normal();
    let nt = transported_normal(jet, boundary)?;
    let (d, dd) = strain_matrices(jet);
    let viscous = jet.mu * ((&d * n).dot(n) - ((&d + &dd) * &nt).dot(&nt));
    Ok(viscous + sigma * curvature_remainder(boundary))
}

/// H(Γ_t) + (N−1)/R − 𝓑ρ on the perturbed sphere.
pub fn curvature_remainder(boundary: &SphereBoundary) -> f64 {
    boundary.h_perturbed + 2.0 / boundary.radius - boundary.b_rho
}

/// Boundary term of the partial-Lagrange formulation:
/// h = −μ{D(u) V0 n + 𝓓 (I + V0) n + K (D(u) + 𝓓)(I + V0) n}.
pub fn assemble_h_partial_lagrange(jet: &FlowJet<f64>, n: &DVector<f64>) -> DVector<f64> {
    let (d, dd) = strain_matrices(jet);
    let v0 = from_mat(&jet.v0);
    let k = from_mat(&jet.k);
    let a_n = n + &v0 * n;
    (&d * (&v0 * n) + &dd * &a_n + k * ((&d + &dd) * &a_n)) * (-jet.mu)
}

/// V_q = n_t − n + Σ g^{ij} τ_i ∂_jρ, the quadratic part of n_t.
pub fn normal_remainder(nt: &DVector<f64>, boundary: &SphereBoundary) -> DVector<f64> {
    nt - boundary.normal() + boundary.surface_gradient()
}

/// d = u·V_q − ∂_tρ ⟨n, V_q⟩ + ⟨ξ′ | ∇′ρ⟩ − ⟨ξ′, V_q⟩.
pub fn assemble_d(u: &DVector<f64>, boundary: &SphereBoundary, nt: &DVector<f64>, dt_rho: f64, xi_prime: &DVector<f64>) -> f64 {
    let vq = normal_remainder(nt, boundary);
    u.dot(&vq) - dt_rho * boundary.normal().dot(&vq) + boundary.pairing(xi_prime) - xi_prime.dot(&vq)
}

/// Ball averages entering the barycenter-corrected kinematic condition.
#[derive(Debug, Clone, PartialEq)]
pub struct Barycenter {
    /// ξ′ = (1/|B_R|) ∫ u (1 + J0) dy
    pub xi_prime: DVector<f64>,
    /// (1/|B_R|) ∫ u J0 dy
    pub j0_mean: DVector<f64>,
}

pub fn barycenter_velocity(state: &FlowState, t: f64, rule: &BallRule) -> Result<Barycenter, NonlinearError> {
    let quad_volume: f64 = rule.points.iter().map(|p| p.1).sum();
    let vol = rule.volume();
    let err = (quad_volume - vol).abs() / vol;
    if err > 1e-10 {
        return Err(NonlinearError::UnderResolved(err));
    }
    let dim = state.u.dim;
    let mut plain = DVector::zeros(dim);
    let mut weighted = DVector::zeros(dim);
    for (y, w) in &rule.points {
        let u = state.u.value(y, t);
        let j0 = compute_v0_j(&state.psi.field.grad(y, t))?.j0;
        plain += &u * *w;
        weighted += &u * (w * j0);
    }
    Ok(Barycenter {
        xi_prime: (plain + &weighted) / vol,
        j0_mean: weighted / vol,
    })
}

/// d̃ = d − ⟨u | ∇′ρ⟩ − n · (1/|B_R|) ∫ u J0 dy, with ξ′ from the ball average.
pub fn assemble_d_tilde(u: &DVector<f64>, boundary: &SphereBoundary, nt: &DVector<f64>, dt_rho: f64, bary: &Barycenter) -> f64 {
    assemble_d(u, boundary, nt, dt_rho, &bary.xi_prime) - boundary.pairing(u) - boundary.normal().dot(&bary.j0_mean)
}

/// All nonlinear terms at one boundary point of the ball.
#[derive(Debug, Clone, PartialEq)]
pub struct NonlinearTerms {
    pub f: DVector<f64>,
    pub g: f64,
    pub gvec: DVector<f64>,
    pub hprime: DVector<f64>,
    pub hn: f64,
    pub d: f64,
}

impl NonlinearTerms {
    pub fn max_abs(&self) -> f64 {
        [self.f.amax(), self.g.abs(), self.gvec.amax(), self.hprime.amax(), self.hn.abs(), self.d.abs()]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// Evaluates every term at the boundary point; d uses ξ′ = `xi_prime`.
pub fn assemble_all(
    state: &FlowState,
    boundary: &SphereBoundary,
    t: f64,
    sigma: f64,
    dt_rho: f64,
    xi_prime: &DVector<f64>,
) -> Result<NonlinearTerms, NonlinearError> {
    let jet = state.jet(boundary.y.as_slice(), t)?;
    let nt = transported_normal(&jet, boundary)?;
    let (g, gvec) = g_terms(&jet);
    Ok(NonlinearTerms {
        f: DVector::from_vec(f_terms(&jet, &Transport::Hanzawa)),
        g,
        gvec: DVector::from_vec(gvec),
        hprime: assemble_hprime(&jet, boundary)?,
        hn: assemble_hn(&jet, boundary, sigma)?,
        d: assemble_d(&DVector::from_vec(jet.u.clone()), boundary, &nt, dt_rho, xi_prime),
    })
}
