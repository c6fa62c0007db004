use super::{FourierProfile, SolveError};
use crate::symbols::{compute_b, compute_b0, compute_d, compute_e_kappa, ResolventPoint, TangentialFrequency};
use num_complex::Complex64 as C64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LopatinskiSolution {
    pub alpha_n: C64,
    pub beta_n: C64,
    pub omega: C64,
}

const SINGULAR_TOL: f64 = 1e-13;

/// Solves 2A²α_N + (A²+B²)β_N = μ⁻¹ r_t and (A²+B²)α_N + 2ABβ_N = μ⁻¹A r_n,
/// where r_t = iξ'·g' and r_n = g_N, by the closed forms through (B − A)D.
/// ω = μ(B² − A²)α_N / A, continued to A = 0 by its regular form.
pub fn solve_lopatinski(a: f64, b: C64, mu: f64, rhs_tangential: C64, rhs_normal: C64) -> Result<LopatinskiSolution, SolveError> {
    let d = compute_d(a, b);
    let det = (b - a) * d;
    let scale = (a.abs() + b.norm()).powi(4);
    if det.norm() <= SINGULAR_TOL * scale {
        return Err(SolveError::SingularSystem(det.norm()));
    }
    let s = a * a + b * b;
    let beta_n = (s * rhs_tangential - 2.0 * a * a * a * rhs_normal) / (mu * det);
    let alpha_n = -(2.0 * a * b * rhs_tangential - s * a * rhs_normal) / (mu * det);
    let omega = if a > 0.0 {
        mu * (b * b - a * a) * alpha_n / a
    } else {
        -(a + b) * (2.0 * b * rhs_tangential - s * rhs_normal) / d
    };
    Ok(LopatinskiSolution { alpha_n, beta_n, omega })
}

fn check_dims(freq: &TangentialFrequency, len: usize) -> Result<usize, SolveError> {
    let n = freq.dim();
    if len != n {
        return Err(SolveError::Dimension { expected: n, got: len });
    }
    Ok(n)
}

/// Mode decomposition produced by the closed forms with right-hand side `r`
/// (boundary rows come out as −r). Written through D only, so it stays
/// regular at B = A and at A = 0.
fn closed_form_profile(point: &ResolventPoint, freq: &TangentialFrequency, b: C64, r: &[C64]) -> Result<FourierProfile, SolveError> {
    let n = freq.dim();
    let a = freq.a;
    let mu = point.mu;
    let d = compute_d(a, b);
    if d.norm() <= SINGULAR_TOL * (a.abs() + b.norm()).powi(3) {
        return Err(SolveError::SingularSystem(d.norm()));
    }
    let ixi = |j: usize| C64::new(0.0, freq.xi_prime[j]);
    let rt: C64 = (0..n - 1).map(|j| ixi(j) * r[j]).sum();
    let rn = r[n - 1];
    let s = a * a + b * b;
    let omega = -(a + b) * (2.0 * b * rt - s * rn) / d;
    // sum_n = α_N + β_N, p_n = (B − A) α_N
    let sum_n = ((b - a) * rt + a * (a + b) * rn) / (mu * d);
    let p_n = -(2.0 * a * b * rt - s * a * rn) / (mu * d);
    let mut coef_exp_a = vec![C64::default(); n + 1];
    coef_exp_a[n] = omega;
    let mut coef_exp_b = vec![C64::default(); n];
    let mut coef_m = vec![C64::default(); n];
    for j in 0..n - 1 {
        let p_j = -ixi(j) * omega / (mu * (a + b));
        coef_exp_b[j] = r[j] / (mu * b) + (ixi(j) * sum_n + p_j) / b;
        coef_m[j] = -p_j;
    }
    coef_exp_b[n - 1] = sum_n;
    coef_m[n - 1] = -p_n;
    Ok(FourierProfile {
        coef_exp_a,
        coef_exp_b,
        coef_m,
        h_hat: None,
        freq: freq.clone(),
        point: point.clone(),
        b,
    })
}

/// Neumann model problem with boundary datum ĥ(ξ', 0): the returned profile
/// satisfies the interior system and μ(∂_N v̂_j + iξ_j v̂_N) = g_j,
/// 2μ∂_N v̂_N − θ̂ = g_N at x_N = 0 with g = −ĥ.
pub fn solve_neumann_model(point: &ResolventPoint, freq: &TangentialFrequency, h_hat0: &[C64]) -> Result<FourierProfile, SolveError> {
    check_dims(freq, h_hat0.len())?;
    let b = compute_b(point, freq)?;
    closed_form_profile(point, freq, b, h_hat0)
}

/// Surface-tension model with datum d̂: ĥ = μD d̂ / E_κ and the velocity
/// driven by the normal stress −σA²ĥ.
pub fn solve_surface_tension_model(point: &ResolventPoint, freq: &TangentialFrequency, d_hat: C64) -> Result<FourierProfile, SolveError> {
    let n = freq.dim();
    let b = compute_b(point, freq)?;
    let e = compute_e_kappa(point, freq)?;
    let a = freq.a;
    let d = compute_d(a, b);
    let scale = point.mu * (point.lambda.norm() + a) * (a + b.norm()).powi(3);
    if e.norm() <= SINGULAR_TOL * scale {
        return Err(SolveError::EKappaNearZero(e.norm()));
    }
    let h = point.mu * d * d_hat / e;
    let mut r = vec![C64::default(); n];
    r[n - 1] = point.sigma * a * a * h;
    let mut profile = closed_form_profile(point, freq, b, &r)?;
    profile.h_hat = Some(h);
    Ok(profile)
}

/// ĝ₂(x_N) = e^{−B0 x_N} ρ̂.
#[derive(Debug, Clone, PartialEq)]
pub struct PressureAuxiliary {
    pub b0: C64,
    pub rho_hat: C64,
    pub lambda: C64,
    pub a: f64,
}

impl PressureAuxiliary {
    pub fn eval(&self, x: f64) -> C64 {
        (-self.b0 * x).exp() * self.rho_hat
    }

    pub fn dx2(&self, x: f64) -> C64 {
        self.b0 * self.b0 * self.eval(x)
    }

    /// Relative residual of (λ + A² − ∂²_N) ĝ₂ = 0 at x.
    pub fn residual(&self, x: f64) -> f64 {
        let g = self.eval(x);
        super::relative(&[self.lambda * g, self.a * self.a * g, -self.dx2(x)])
    }
}

pub fn solve_pressure_auxiliary(point: &ResolventPoint, freq: &TangentialFrequency, rho_hat0: C64) -> Result<PressureAuxiliary, SolveError> {
    Ok(PressureAuxiliary {
        b0: compute_b0(point, freq)?,
        rho_hat: rho_hat0,
        lambda: point.lambda,
        a: freq.a,
    })
}
