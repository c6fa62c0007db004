use super::relative;
use crate::symbols::{compute_m, ResolventPoint, TangentialFrequency};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

/// A half-space solution mode in tangential Fourier variables:
/// v̂_j(x) = a_j e^{−Ax} + b_j e^{−Bx} + c_j 𝓜(x), θ̂(x) = a_{N+1} e^{−Ax}.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierProfile {
    /// Coefficients of e^{−A x_N} for v̂_1..v̂_N and the pressure θ̂.
    pub coef_exp_a: Vec<C64>,
    /// Coefficients of e^{−B x_N} for v̂_1..v̂_N.
    pub coef_exp_b: Vec<C64>,
    /// Coefficients of 𝓜(x_N) for v̂_1..v̂_N.
    pub coef_m: Vec<C64>,
    pub h_hat: Option<C64>,
    pub freq: TangentialFrequency,
    pub point: ResolventPoint,
    pub b: C64,
}

/// Worst relative residual of each equation family over the sampled x_N.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ModelResiduals {
    pub momentum: f64,
    pub divergence: f64,
    pub boundary_tangential: f64,
    pub boundary_normal: f64,
    pub kinematic: Option<f64>,
}

impl ModelResiduals {
    pub fn max(&self) -> f64 {
        [
            self.momentum,
            self.divergence,
            self.boundary_tangential,
            self.boundary_normal,
            self.kinematic.unwrap_or(0.0),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

impl FourierProfile {
    pub fn dim(&self) -> usize {
        self.coef_exp_b.len()
    }

    fn a(&self) -> f64 {
        self.freq.a
    }

    fn xi(&self, j: usize) -> C64 {
        C64::new(0.0, self.freq.xi_prime[j])
    }

    /// (e^{−Ax}, e^{−Bx}, 𝓜(x))
    fn kernels(&self, x: f64) -> (C64, C64, C64) {
        let a = self.a();
        (
            C64::new((-a * x).exp(), 0.0),
            (-self.b * x).exp(),
            compute_m(x, a, self.b),
        )
    }

    /// ∂_N^k v̂_j at x for k = 0, 1, 2.
    pub fn velocity_derivative(&self, j: usize, x: f64, k: usize) -> C64 {
        let (ea, eb, m) = self.kernels(x);
        let (a, b) = (self.a(), self.b);
        let (ca, cb, cm) = (self.coef_exp_a[j], self.coef_exp_b[j], self.coef_m[j]);
        match k {
            0 => ca * ea + cb * eb + cm * m,
            1 => -a * ca * ea - b * cb * eb + cm * (-eb - a * m),
            2 => a * a * ca * ea + b * b * cb * eb + cm * ((a + b) * eb + a * a * m),
            _ => panic!("derivative order {k} not stored"),
        }
    }

    pub fn velocity(&self, x: f64) -> Vec<C64> {
        (0..self.dim()).map(|j| self.velocity_derivative(j, x, 0)).collect()
    }

    pub fn pressure(&self, x: f64) -> C64 {
        self.coef_exp_a[self.dim()] * (-self.a() * x).exp()
    }

    pub fn pressure_dx(&self, x: f64) -> C64 {
        -self.a() * self.pressure(x)
    }

    /// Exact coefficient identities of Σ iξ_j v̂_j + ∂_N v̂_N = 0, per kernel.
    pub fn divergence_coefficients(&self) -> [C64; 3] {
        let n = self.dim();
        let (a, b) = (self.a(), self.b);
        let mut ka = -a * self.coef_exp_a[n - 1];
        let mut kb = -b * self.coef_exp_b[n - 1] - self.coef_m[n - 1];
        let mut km = -a * self.coef_m[n - 1];
        for j in 0..n - 1 {
            ka += self.xi(j) * self.coef_exp_a[j];
            kb += self.xi(j) * self.coef_exp_b[j];
            km += self.xi(j) * self.coef_m[j];
        }
        [ka, kb, km]
    }

    /// Residuals of the interior system at `xs` and of the boundary rows
    /// μ(∂_N v̂_j + iξ_j v̂_N) = g_j, 2μ ∂_N v̂_N − θ̂ = g_N at x_N = 0.
    pub fn residuals(&self, xs: &[f64], g: &[C64]) -> ModelResiduals {
        let n = self.dim();
        let mu = self.point.mu;
        let lambda = self.point.lambda;
        let a2 = self.a() * self.a();
        let mut r = ModelResiduals::default();
        for &x in xs {
            let v0: Vec<C64> = (0..n).map(|j| self.velocity_derivative(j, x, 0)).collect();
            let v2: Vec<C64> = (0..n).map(|j| self.velocity_derivative(j, x, 2)).collect();
            let th = self.pressure(x);
            for j in 0..n {
                let grad = if j < n - 1 { self.xi(j) * th } else { self.pressure_dx(x) };
                let res = relative(&[lambda * v0[j], mu * a2 * v0[j], -mu * v2[j], grad]);
                r.momentum = r.momentum.max(res);
            }
            let mut terms: Vec<C64> = (0..n - 1).map(|j| self.xi(j) * v0[j]).collect();
            terms.push(self.velocity_derivative(n - 1, x, 1));
            r.divergence = r.divergence.max(relative(&terms));
        }
        let vn0 = self.velocity_derivative(n - 1, 0.0, 0);
        for j in 0..n - 1 {
            let res = relative(&[
                mu * self.velocity_derivative(j, 0.0, 1),
                mu * self.xi(j) * vn0,
                -g[j],
            ]);
            r.boundary_tangential = r.boundary_tangential.max(res);
        }
        r.boundary_normal = relative(&[
            2.0 * mu * self.velocity_derivative(n - 1, 0.0, 1),
            -self.pressure(0.0),
            -g[n - 1],
        ]);
        r
    }

    /// Residuals of the surface-tension system: homogeneous tangential rows,
    /// 2μ∂_N ŵ_N − q̂ = −σA²ĥ, and λĥ + iξ'·A_κ ĥ + ŵ_N(0) = d̂.
    pub fn tension_residuals(&self, xs: &[f64], d_hat: C64) -> ModelResiduals {
        let n = self.dim();
        let h = self.h_hat.unwrap_or_default();
        let mut g = vec![C64::default(); n];
        g[n - 1] = -self.point.sigma * self.a() * self.a() * h;
        let mut r = self.residuals(xs, &g);
        let drift: f64 = self
            .freq
            .xi_prime
            .iter()
            .zip(&self.point.a_kappa)
            .map(|(x, k)| x * k)
            .sum();
        r.kinematic = Some(relative(&[
            self.point.lambda * h,
            C64::new(0.0, drift) * h,
            self.velocity_derivative(n - 1, 0.0, 0),
            -d_hat,
        ]));
        r
    }

    pub fn to_json(&self) -> ProfileJson {
        let pair = |z: &C64| [z.re, z.im];
        ProfileJson {
            lambda: pair(&self.point.lambda),
            mu: self.point.mu,
            sigma: self.point.sigma,
            a_kappa: self.point.a_kappa.clone(),
            xi_prime: self.freq.xi_prime.clone(),
            coef_exp_a: self.coef_exp_a.iter().map(pair).collect(),
            coef_exp_b: self.coef_exp_b.iter().map(pair).collect(),
            coef_m: self.coef_m.iter().map(pair).collect(),
            h_hat: self.h_hat.as_ref().map(pair),
        }
    }
}

/// Serialized profile: complex numbers as [re, im] pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileJson {
    pub lambda: [f64; 2],
    pub mu: f64,
    pub sigma: f64,
    pub a_kappa: Vec<f64>,
    pub xi_prime: Vec<f64>,
    #[serde(rename = "coef_expA")]
    pub coef_exp_a: Vec<[f64; 2]>,
    #[serde(rename = "coef_expB")]
    pub coef_exp_b: Vec<[f64; 2]>,
    #[serde(rename = "coef_M")]
    pub coef_m: Vec<[f64; 2]>,
    pub h_hat: Option<[f64; 2]>,
}
