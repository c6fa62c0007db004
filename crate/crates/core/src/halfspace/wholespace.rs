use super::{relative, SolveError};
use crate::symbols::ResolventPoint;
use num_complex::Complex64 as C64;

/// Fourier-side solution of the resolvent Stokes problem in R^N with the
/// divergence datum g = (λ − Δ)⁻¹ div f.
pub struct WholeSpaceSolution<F> {
    pub point: ResolventPoint,
    f_hat: F,
}

pub fn solve_wholespace<F: Fn(&[f64]) -> Vec<C64>>(point: &ResolventPoint, f_hat: F) -> WholeSpaceSolution<F> {
    WholeSpaceSolution { point: point.clone(), f_hat }
}

fn norm2(xi: &[f64]) -> f64 {
    xi.iter().map(|x| x * x).sum()
}

fn i_dot(xi: &[f64], v: &[C64]) -> C64 {
    C64::new(0.0, 1.0) * xi.iter().zip(v).map(|(x, c)| x * c).sum::<C64>()
}

impl<F: Fn(&[f64]) -> Vec<C64>> WholeSpaceSolution<F> {
    fn checked(&self, xi: &[f64]) -> Result<(Vec<C64>, f64), SolveError> {
        let r2 = norm2(xi);
        if r2 == 0.0 {
            return Err(SolveError::ZeroFrequency);
        }
        Ok(((self.f_hat)(xi), r2))
    }

    /// û = f̂/(λ+μ|ξ|²) + (μ−1) ξ(ξ·f̂) / ((λ+μ|ξ|²)(λ+|ξ|²)).
    pub fn u_hat(&self, xi: &[f64]) -> Result<Vec<C64>, SolveError> {
        let (f, r2) = self.checked(xi)?;
        let lam = self.point.lambda;
        let mu = self.point.mu;
        let p = lam + mu * r2;
        let q = lam + r2;
        let xf: C64 = xi.iter().zip(&f).map(|(x, c)| x * c).sum();
        Ok(f.iter()
            .zip(xi)
            .map(|(fj, &x)| fj / p + (mu - 1.0) * x * xf / (p * q))
            .collect())
    }

    /// ĝ = iξ·f̂ / (λ + |ξ|²).
    pub fn g_hat(&self, xi: &[f64]) -> Result<C64, SolveError> {
        let (f, r2) = self.checked(xi)?;
        Ok(i_dot(xi, &f) / (self.point.lambda + r2))
    }

    /// ĝvec = λ⁻¹(f̂ + iξ ĝ).
    pub fn gvec_hat(&self, xi: &[f64]) -> Result<Vec<C64>, SolveError> {
        let (f, _) = self.checked(xi)?;
        let g = self.g_hat(xi)?;
        Ok(f.iter()
            .zip(xi)
            .map(|(fj, &x)| (fj + C64::new(0.0, x) * g) / self.point.lambda)
            .collect())
    }

    /// q̂ = 2μĝ − (iξ·f̂ − λ iξ·ĝvec)/|ξ|².
    pub fn q_hat(&self, xi: &[f64]) -> Result<C64, SolveError> {
        let (f, r2) = self.checked(xi)?;
        let g = self.g_hat(xi)?;
        let gv = self.gvec_hat(xi)?;
        Ok(2.0 * self.point.mu * g - (i_dot(xi, &f) - self.point.lambda * i_dot(xi, &gv)) / r2)
    }

    /// Worst component of λû + μ|ξ|²û + μξ(ξ·û) + iξq̂ − f̂, relative.
    pub fn momentum_residual(&self, xi: &[f64]) -> Result<f64, SolveError> {
        let (f, r2) = self.checked(xi)?;
        let u = self.u_hat(xi)?;
        let q = self.q_hat(xi)?;
        let mu = self.point.mu;
        let xu: C64 = xi.iter().zip(&u).map(|(x, c)| x * c).sum();
        Ok((0..xi.len())
            .map(|j| {
                relative(&[
                    self.point.lambda * u[j],
                    mu * r2 * u[j],
                    mu * xi[j] * xu,
                    C64::new(0.0, xi[j]) * q,
                    -f[j],
                ])
            })
            .fold(0.0, f64::max))
    }

    /// |iξ·û − ĝ| relative.
    pub fn divergence_residual(&self, xi: &[f64]) -> Result<f64, SolveError> {
        let u = self.u_hat(xi)?;
        let mut terms: Vec<C64> = xi
            .iter()
            .zip(&u)
            .map(|(&x, c)| C64::new(0.0, x) * c)
            .collect();
        terms.push(-self.g_hat(xi)?);
        Ok(relative(&terms))
    }
}
