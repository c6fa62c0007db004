use super::{relative, SolveError};
use num_complex::Complex64 as C64;
use rustfft::FftPlanner;

/// û = −iξ·f̂ / |ξ|², the Fourier solution of Δu = div f in R^N.
pub struct WeakLaplace<F> {
    f_hat: F,
}

pub fn solve_weak_laplace_wholespace<F: Fn(&[f64]) -> Vec<C64>>(f_hat: F) -> WeakLaplace<F> {
    WeakLaplace { f_hat }
}

impl<F: Fn(&[f64]) -> Vec<C64>> WeakLaplace<F> {
    pub fn eval(&self, xi: &[f64]) -> Result<C64, SolveError> {
        let r2: f64 = xi.iter().map(|x| x * x).sum();
        if r2 == 0.0 {
            return Err(SolveError::ZeroFrequency);
        }
        let f = (self.f_hat)(xi);
        let div: C64 = xi.iter().zip(&f).map(|(&x, c)| C64::new(0.0, x) * c).sum();
        Ok(-div / r2)
    }

    /// Relative residual of −|ξ|²û = iξ·f̂.
    pub fn residual(&self, xi: &[f64]) -> Result<f64, SolveError> {
        let u = self.eval(xi)?;
        let r2: f64 = xi.iter().map(|x| x * x).sum();
        let f = (self.f_hat)(xi);
        let mut terms: Vec<C64> = xi
            .iter()
            .zip(&f)
            .map(|(&x, c)| -C64::new(0.0, x) * c)
            .collect();
        terms.push(-r2 * u);
        Ok(relative(&terms))
    }
}

/// Solution of Δu = div f in R^N_+, u = 0 on x_N = 0, sampled on the
/// periodic box [−L, L)^N (L = 4 × support radius). Index order is
/// row-major with the last axis (x_N) fastest.
#[derive(Debug, Clone)]
pub struct WeakDirichletSolution {
    pub dim: usize,
    pub n: usize,
    pub half_width: f64,
    pub u: Vec<f64>,
}

impl WeakDirichletSolution {
    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    pub fn coordinate(&self, k: usize) -> f64 {
        -self.half_width + k as f64 * self.spacing()
    }

    pub fn point(&self, idx: &[usize]) -> Vec<f64> {
        idx.iter().map(|&k| self.coordinate(k)).collect()
    }

    fn flat(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &k| acc * self.n + k)
    }

    fn unflat(&self, mut f: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim];
        for d in (0..self.dim).rev() {
            idx[d] = f % self.n;
            f /= self.n;
        }
        idx
    }

    pub fn value(&self, idx: &[usize]) -> f64 {
        self.u[self.flat(idx)]
    }

    /// Index of the x_N = 0 plane.
    pub fn boundary_index(&self) -> usize {
        self.n / 2
    }

    /// max |u| on x_N = 0.
    pub fn boundary_max(&self) -> f64 {
        let k0 = self.boundary_index();
        (0..self.u.len())
            .filter(|&f| self.unflat(f)[self.dim - 1] == k0)
            .map(|f| self.u[f].abs())
            .fold(0.0, f64::max)
    }

    /// Second-order periodic finite-difference Laplacian at a grid index.
    pub fn fd_laplacian(&self, idx: &[usize]) -> f64 {
        let h2 = self.spacing().powi(2);
        let c = self.value(idx);
        let mut s = 0.0;
        for d in 0..self.dim {
            let mut p = idx.to_vec();
            let mut m = idx.to_vec();
            p[d] = (idx[d] + 1) % self.n;
            m[d] = (idx[d] + self.n - 1) % self.n;
            s += self.value(&p) - 2.0 * c + self.value(&m);
        }
        s / h2
    }

    /// max over half-space grid points of |Δ_h u − div f|.
    pub fn laplacian_residual<G: Fn(&[f64]) -> f64>(&self, div_f: G) -> f64 {
        let k0 = self.boundary_index();
        (0..self.u.len())
            .map(|f| self.unflat(f))
            .filter(|idx| idx[self.dim - 1] >= k0)
            .map(|idx| (self.fd_laplacian(&idx) - div_f(&self.point(&idx))).abs())
            .fold(0.0, f64::max)
    }

    /// max over half-space grid points of |u − exact|.
    pub fn max_error<G: Fn(&[f64]) -> f64>(&self, exact: G) -> f64 {
        let k0 = self.boundary_index();
        (0..self.u.len())
            .map(|f| self.unflat(f))
            .filter(|idx| idx[self.dim - 1] >= k0)
            .map(|idx| (self.value(&idx) - exact(&self.point(&idx))).abs())
            .fold(0.0, f64::max)
    }
}

fn fft_axis(data: &mut [C64], dim: usize, n: usize, axis: usize, inverse: bool, planner: &mut FftPlanner<f64>) {
    let fft = if inverse { planner.plan_fft_inverse(n) } else { planner.plan_fft_forward(n) };
    let stride = n.pow((dim - 1 - axis) as u32);
    let mut line = vec![C64::default(); n];
    for start in 0..data.len() {
        if !(start / stride).is_multiple_of(n) {
            continue;
        }
        for k in 0..n {
            line[k] = data[start + k * stride];
        }
        fft.process(&mut line);
        for k in 0..n {
            data[start + k * stride] = line[k];
        }
    }
}

/// Odd/even reflection solver: f_j (j < N) is extended oddly and f_N evenly
/// across x_N = 0, then u = −F⁻¹[F[div f^ext] / |ξ|²] on the periodic box.
/// `support_radius` bounds the support of f; the box side is four times its
/// diameter. `n` points per axis (even).
pub fn solve_weak_dirichlet_halfspace<F: Fn(&[f64]) -> Vec<f64>>(
    f: F,
    dim: usize,
    support_radius: f64,
    n: usize,
) -> Result<WeakDirichletSolution, SolveError> {
    if n < 4 || n % 2 == 1 {
        return Err(SolveError::EmptyGrid);
    }
    let half_width = 4.0 * support_radius;
    let mut sol = WeakDirichletSolution { dim, n, half_width, u: vec![0.0; n.pow(dim as u32)] };
    let total = sol.u.len();
    let k0 = sol.boundary_index();

    let mut trace = 0.0f64;
    let mut fmax = 0.0f64;
    let mut comps: Vec<Vec<C64>> = vec![vec![C64::default(); total]; dim];
    for flat in 0..total {
        let idx = sol.unflat(flat);
        let kn = idx[dim - 1];
        let mut x = sol.point(&idx);
        let mirrored = kn < k0;
        if mirrored {
            x[dim - 1] = -x[dim - 1];
        }
        let v = f(&x);
        if v.len() != dim {
            return Err(SolveError::Dimension { expected: dim, got: v.len() });
        }
        fmax = v.iter().fold(fmax, |m, c| m.max(c.abs()));
        let on_plane = kn == k0 || kn == 0;
        for j in 0..dim {
            let val = if j < dim - 1 {
                if kn == k0 {
                    trace = trace.max(v[j].abs());
                }
                if on_plane {
                    0.0
                } else if mirrored {
                    -v[j]
                } else {
                    v[j]
                }
            } else {
                v[j]
            };
            comps[j][flat] = C64::new(val, 0.0);
        }
    }
    if trace > 1e-10 * fmax.max(f64::MIN_POSITIVE) {
        return Err(SolveError::SupportTouchesBoundary(trace));
    }

    let mut planner = FftPlanner::new();
    for c in comps.iter_mut() {
        for axis in 0..dim {
            fft_axis(c, dim, n, axis, false, &mut planner);
        }
    }
    let freq = |k: usize| {
        let kk = if k < n / 2 { k as f64 } else { k as f64 - n as f64 };
        std::f64::consts::PI * kk / half_width
    };
    // The grid starts at −L, which multiplies every mode by a phase that
    // cancels between forward and inverse transforms.
    let mut uh = vec![C64::default(); total];
    for flat in 0..total {
        let idx = sol.unflat(flat);
        let xi: Vec<f64> = idx.iter().map(|&k| freq(k)).collect();
        let r2: f64 = xi.iter().map(|x| x * x).sum();
        if r2 == 0.0 {
            continue;
        }
        let div: C64 = (0..dim).map(|j| C64::new(0.0, xi[j]) * comps[j][flat]).sum();
        uh[flat] = -div / r2;
    }
    for axis in 0..dim {
        fft_axis(&mut uh, dim, n, axis, true, &mut planner);
    }
    let norm = total as f64;
    sol.u = uh.iter().map(|z| z.re / norm).collect();
    Ok(sol)
}
