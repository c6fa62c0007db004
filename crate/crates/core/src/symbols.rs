//! Scalar symbols of the half-space resolvent problem.
//!
//! With A = |ξ'| and λ in the sector, B = √(λ/μ + A²) and B0 = √(λ + A²)
//! (principal roots, Re > 0). D is the Lopatinski cubic, det L = (B − A) D,
//! and E_κ = μ(λ + iξ'·A_κ) D + σ A³ (A + B) governs the surface-tension model.

use crate::quadrature::gauss_legendre;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::OnceLock;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SymbolError {
    #[error("branch ambiguity: radicand {0} is a nonpositive real")]
    BranchAmbiguity(C64),
    #[error("empty parameter grid")]
    EmptyGrid,
    #[error("finite-difference noise dominates at step {step:e} (Richardson mismatch {mismatch:e})")]
    StepTooSmall { step: f64, mismatch: f64 },
    #[error("unsupported derivative order {0} (at most 2)")]
    DerivativeOrder(usize),
}

/// Admissible λ set used by [`ResolventPoint::is_admissible`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SectorMode {
    /// |arg λ| ≤ π − ε and |λ| ≥ λ0.
    Sector,
    /// Re λ ≥ λ0.
    HalfPlane,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolventPoint {
    pub lambda: C64,
    pub mu: f64,
    pub sigma: f64,
    pub a_kappa: Vec<f64>,
    pub sector_angle: f64,
    pub lambda0: f64,
    pub mode: SectorMode,
}

impl ResolventPoint {
    /// Point with σ = 0, A_κ = 0, ε = π/4, λ0 = 1 in sector mode.
    pub fn new(lambda: C64, mu: f64) -> Self {
        Self {
            lambda,
            mu,
            sigma: 0.0,
            a_kappa: Vec::new(),
            sector_angle: PI / 4.0,
            lambda0: 1.0,
            mode: SectorMode::Sector,
        }
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn with_a_kappa(mut self, a_kappa: Vec<f64>) -> Self {
        self.a_kappa = a_kappa;
        self
    }

    pub fn with_sector(mut self, sector_angle: f64, lambda0: f64) -> Self {
        self.sector_angle = sector_angle;
        self.lambda0 = lambda0;
        self
    }

    pub fn is_admissible(&self) -> bool {
        match self.mode {
            SectorMode::Sector => {
                self.lambda.norm() >= self.lambda0
                    && self.lambda.arg().abs() <= PI - self.sector_angle + 1e-15
            }
            SectorMode::HalfPlane => self.lambda.re >= self.lambda0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TangentialFrequency {
    pub xi_prime: Vec<f64>,
    pub a: f64,
}

impl TangentialFrequency {
    pub fn new(xi_prime: Vec<f64>) -> Self {
        let a = xi_prime.iter().map(|x| x * x).sum::<f64>().sqrt();
        Self { xi_prime, a }
    }

    /// Ambient dimension N (ξ' has N − 1 components).
    pub fn dim(&self) -> usize {
        self.xi_prime.len() + 1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolValues {
    pub a: f64,
    pub b: C64,
    pub b0: C64,
    pub d: C64,
    pub e_kappa: C64,
    pub det_l: C64,
}

/// Principal square root; refuses radicands on the closed negative real axis.
pub fn principal_sqrt(z: C64) -> Result<C64, SymbolError> {
    if z.im == 0.0 && z.re <= 0.0 {
        return Err(SymbolError::BranchAmbiguity(z));
    }
    Ok(z.sqrt())
}

pub fn compute_b(point: &ResolventPoint, freq: &TangentialFrequency) -> Result<C64, SymbolError> {
    principal_sqrt(point.lambda / point.mu + freq.a * freq.a)
}

pub fn compute_b0(point: &ResolventPoint, freq: &TangentialFrequency) -> Result<C64, SymbolError> {
    principal_sqrt(point.lambda + freq.a * freq.a)
}

/// Threshold below which 𝓜 switches to its integral form.
pub const M_SWITCH_TOL: f64 = 1e-6;

fn m_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| {
        let r = gauss_legendre(24, 0.0, 1.0);
        (r.nodes, r.weights)
    })
}

/// 𝓜(x) = −x ∫₀¹ exp(−(A + θ(B − A)) x) dθ by fixed 24-point Gauss–Legendre.
pub fn compute_m_quadrature(x: f64, a: f64, b: C64) -> C64 {
    let (nodes, weights) = m_rule();
    let s: C64 = nodes
        .iter()
        .zip(weights)
        .map(|(&t, &w)| w * (-(a + t * (b - a)) * x).exp())
        .sum();
    -x * s
}

/// 𝓜(x) = (e^{−Bx} − e^{−Ax}) / (B − A).
pub fn compute_m(x: f64, a: f64, b: C64) -> C64 {
    let diff = b - a;
    if diff.norm() < M_SWITCH_TOL * (1.0 + a.abs() + b.norm()) {
        compute_m_quadrature(x, a, b)
    } else {
        ((-b * x).exp() - (-a * x).exp()) / diff
    }
}

/// d𝓜/dx = −e^{−Bx} − A 𝓜(x).
pub fn compute_m_dx(x: f64, a: f64, b: C64) -> C64 {
    -(-b * x).exp() - a * compute_m(x, a, b)
}

/// D(A, B) = B³ + A B² + 3 A² B − A³. A is |ξ'| in every solver; complex A
/// is accepted so the polynomial identities can be probed off the real axis.
pub fn compute_d(a: impl Into<C64>, b: C64) -> C64 {
    let a = a.into();
    b * b * b + a * b * b + 3.0 * a * a * b - a * a * a
}

/// The same cubic written with B² = λ/μ + A²: B(λ/μ + 4A²) + A λ/μ.
pub fn compute_d_alt(a: f64, b: C64, lambda: C64, mu: f64) -> C64 {
    b * (lambda / mu + 4.0 * a * a) + a * lambda / mu
}

/// det L = (A² + B²)² − 4 A³ B.
pub fn compute_det_l(a: impl Into<C64>, b: C64) -> C64 {
    let a = a.into();
    let s = b * b + a * a;
    s * s - 4.0 * a * a * a * b
}

pub fn compute_e_kappa(point: &ResolventPoint, freq: &TangentialFrequency) -> Result<C64, SymbolError> {
    let b = compute_b(point, freq)?;
    Ok(e_kappa_from(point, freq, b))
}

fn e_kappa_from(point: &ResolventPoint, freq: &TangentialFrequency, b: C64) -> C64 {
    let a = freq.a;
    let drift: f64 = freq
        .xi_prime
        .iter()
        .zip(&point.a_kappa)
        .map(|(x, k)| x * k)
        .sum();
    point.mu * (point.lambda + C64::new(0.0, drift)) * compute_d(a, b)
        + point.sigma * a * a * a * (a + b)
}

pub fn compute_symbols(point: &ResolventPoint, freq: &TangentialFrequency) -> Result<SymbolValues, SymbolError> {
    let b = compute_b(point, freq)?;
    let b0 = compute_b0(point, freq)?;
    Ok(SymbolValues {
        a: freq.a,
        b,
        b0,
        d: compute_d(freq.a, b),
        e_kappa: e_kappa_from(point, freq, b),
        det_l: compute_det_l(freq.a, b),
    })
}

/// Log-spaced |λ| × uniform arg λ × log-spaced A, for each μ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorGrid {
    pub sector_angle: f64,
    pub lambda0: f64,
    pub lambda_max: f64,
    pub n_lambda: usize,
    pub n_arg: usize,
    pub a_min: f64,
    pub a_max: f64,
    pub n_a: usize,
    pub mus: Vec<f64>,
    pub sigma: f64,
}

impl Default for SectorGrid {
    fn default() -> Self {
        Self {
            sector_angle: PI / 4.0,
            lambda0: 1.0,
            lambda_max: 1e4,
            n_lambda: 17,
            n_arg: 17,
            a_min: 1e-3,
            a_max: 1e2,
            n_a: 21,
            mus: vec![0.5, 1.0, 2.0],
            sigma: 1.0,
        }
    }
}

fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|k| (lo.ln() + (hi.ln() - lo.ln()) * k as f64 / (n - 1) as f64).exp())
            .collect(),
    }
}

fn lin_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// One grid node: (λ, A, μ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridNode {
    pub lambda: C64,
    pub a: f64,
    pub mu: f64,
}

impl SectorGrid {
    pub fn lambdas(&self) -> Vec<C64> {
        let theta = PI - self.sector_angle;
        let mods = log_space(self.lambda0, self.lambda_max, self.n_lambda);
        let args = lin_space(-theta, theta, self.n_arg);
        mods.iter()
            .flat_map(|&r| args.iter().map(move |&t| C64::from_polar(r, t)))
            .collect()
    }

    pub fn a_values(&self) -> Vec<f64> {
        log_space(self.a_min, self.a_max, self.n_a)
    }

    /// All nodes in deterministic (μ, λ, A) order.
    pub fn nodes(&self) -> Vec<GridNode> {
        let lams = self.lambdas();
        let avals = self.a_values();
        let mut out = Vec::with_capacity(self.mus.len() * lams.len() * avals.len());
        for &mu in &self.mus {
            for &lambda in &lams {
                for &a in &avals {
                    out.push(GridNode { lambda, a, mu });
                }
            }
        }
        out
    }

    /// Nested refinement: 2n − 1 points per axis keeps every old node.
    pub fn refined(&self) -> Self {
        let d = |n: usize| if n > 1 { 2 * n - 1 } else { n };
        Self {
            n_lambda: d(self.n_lambda),
            n_arg: d(self.n_arg),
            n_a: d(self.n_a),
            ..self.clone()
        }
    }
}

/// Symbol functionals whose ratios to a weight are bounded above and below on sectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SymbolFunctional {
    ReB,
    AbsB,
    AbsD,
    /// |E_0| with A_κ = 0 and the grid's σ.
    AbsE0,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Normalizer {
    /// |λ|^{1/2} + A
    SqrtLambdaPlusA,
    /// (|λ|/μ)^{1/2} + A
    SqrtLambdaOverMuPlusA,
    /// ((|λ|/μ)^{1/2} + A)³
    SqrtLambdaOverMuPlusACubed,
    /// (|λ|^{1/2} + A)³
    SqrtLambdaPlusACubed,
    /// (|λ| + A)(|λ|^{1/2} + A)³
    E0Weight,
}

pub fn eval_functional(f: SymbolFunctional, node: &GridNode, sigma: f64) -> Result<f64, SymbolError> {
    let b = principal_sqrt(node.lambda / node.mu + node.a * node.a)?;
    Ok(match f {
        SymbolFunctional::ReB => b.re,
        SymbolFunctional::AbsB => b.norm(),
        SymbolFunctional::AbsD => compute_d(node.a, b).norm(),
        SymbolFunctional::AbsE0 => {
            let a = node.a;
            (node.mu * node.lambda * compute_d(a, b) + sigma * a * a * a * (a + b)).norm()
        }
    })
}

pub fn eval_normalizer(w: Normalizer, node: &GridNode) -> f64 {
    let l = node.lambda.norm();
    let a = node.a;
    match w {
        Normalizer::SqrtLambdaPlusA => l.sqrt() + a,
        Normalizer::SqrtLambdaOverMuPlusA => (l / node.mu).sqrt() + a,
        Normalizer::SqrtLambdaOverMuPlusACubed => ((l / node.mu).sqrt() + a).powi(3),
        Normalizer::SqrtLambdaPlusACubed => (l.sqrt() + a).powi(3),
        Normalizer::E0Weight => (l + a) * (l.sqrt() + a).powi(3),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundEstimate {
    pub c_min: f64,
    pub argmin: GridNode,
    pub c_max: f64,
    pub argmax: GridNode,
    pub n_points: usize,
    pub symbol: SymbolFunctional,
    pub normalizer: Normalizer,
}

/// Grid min and max of |symbol| / normalizer. Ties keep the first node in
/// grid order, so the result is independent of evaluation order.
pub fn estimate_bound_constant(
    symbol: SymbolFunctional,
    normalizer: Normalizer,
    nodes: &[GridNode],
    sigma: f64,
) -> Result<BoundEstimate, SymbolError> {
    let ratios = nodes
        .iter()
        .map(|n| Ok(eval_functional(symbol, n, sigma)? / eval_normalizer(normalizer, n)))
        .collect::<Result<Vec<f64>, SymbolError>>()?;
    reduce_ratios(symbol, normalizer, nodes, &ratios)
}

/// Deterministic min/max reduction over precomputed ratios (grid order).
pub fn reduce_ratios(
    symbol: SymbolFunctional,
    normalizer: Normalizer,
    nodes: &[GridNode],
    ratios: &[f64],
) -> Result<BoundEstimate, SymbolError> {
    if nodes.is_empty() {
        return Err(SymbolError::EmptyGrid);
    }
    let (mut imin, mut imax) = (0, 0);
    for (i, r) in ratios.iter().enumerate() {
        if *r < ratios[imin] {
            imin = i;
        }
        if *r > ratios[imax] {
            imax = i;
        }
    }
    Ok(BoundEstimate {
        c_min: ratios[imin],
        argmin: nodes[imin],
        c_max: ratios[imax],
        argmax: nodes[imax],
        n_points: nodes.len(),
        symbol,
        normalizer,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lambda1Estimate {
    pub lambda1: f64,
    pub bound: BoundEstimate,
    pub c_floor: f64,
    pub iterations: usize,
}

/// Smallest λ1 in [lo, hi] (bisection in log|λ|) for which the grid minimum of
/// |E_0| / ((|λ| + A)(|λ|^{1/2} + A)³) over |λ| ∈ [λ1, 10⁴ λ1] is at least
/// `c_floor`. `template` supplies the angular/A resolution, μ values and σ.
pub fn find_lambda1(
    template: &SectorGrid,
    c_floor: f64,
    lo: f64,
    hi: f64,
    iterations: usize,
) -> Result<Lambda1Estimate, SymbolError> {
    let eval = |l1: f64| {
        let g = SectorGrid {
            lambda0: l1,
            lambda_max: 1e4 * l1,
            ..template.clone()
        };
        estimate_bound_constant(
            SymbolFunctional::AbsE0,
            Normalizer::E0Weight,
            &g.nodes(),
            template.sigma,
        )
    };
    let at_lo = eval(lo)?;
    if at_lo.c_min >= c_floor {
        return Ok(Lambda1Estimate {
            lambda1: lo,
            bound: at_lo,
            c_floor,
            iterations: 0,
        });
    }
    let (mut a, mut b) = (lo.ln(), hi.ln());
    let mut best = eval(hi)?;
    for _ in 0..iterations {
        let m = 0.5 * (a + b);
        let e = eval(m.exp())?;
        if e.c_min >= c_floor {
            b = m;
            best = e;
        } else {
            a = m;
        }
    }
    Ok(Lambda1Estimate {
        lambda1: b.exp(),
        bound: best,
        c_floor,
        iterations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MultiplierType {
    /// Weight (|λ|^{1/2} + |ξ'|)^{s − |α|}.
    One,
    /// Weight (|λ|^{1/2} + |ξ'|)^s |ξ'|^{−|α|}.
    Two,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplierReport {
    pub order_s: f64,
    pub kind: MultiplierType,
    pub max_deriv: usize,
    pub rel_step: f64,
    /// (multi-index, C_α) in lexicographic order of the multi-index.
    pub constants: Vec<(Vec<usize>, f64)>,
    /// max_α C_α
    pub bound: f64,
}

fn multi_indices(dim: usize, max_order: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![0; dim]];
    if max_order >= 1 {
        for i in 0..dim {
            let mut a = vec![0; dim];
            a[i] = 1;
            out.push(a);
        }
    }
    if max_order >= 2 {
        for i in 0..dim {
            for j in i..dim {
                let mut a = vec![0; dim];
                a[i] += 1;
                a[j] += 1;
                out.push(a);
            }
        }
    }
    out
}

fn fd_derivative<M: Fn(C64, &[f64]) -> C64>(m: &M, lambda: C64, xi: &[f64], alpha: &[usize], h: f64) -> C64 {
    let shifted = |shifts: &[(usize, f64)]| {
        let mut x = xi.to_vec();
        for &(i, s) in shifts {
            x[i] += s;
        }
        m(lambda, &x)
    };
    let idx: Vec<usize> = alpha
        .iter()
        .enumerate()
        .flat_map(|(i, &k)| std::iter::repeat_n(i, k))
        .collect();
    match idx.as_slice() {
        [] => m(lambda, xi),
        [i] => (shifted(&[(*i, h)]) - shifted(&[(*i, -h)])) / (2.0 * h),
        [i, j] if i == j => {
            (shifted(&[(*i, h)]) - 2.0 * m(lambda, xi) + shifted(&[(*i, -h)])) / (h * h)
        }
        [i, j] => {
            (shifted(&[(*i, h), (*j, h)]) - shifted(&[(*i, h), (*j, -h)])
                - shifted(&[(*i, -h), (*j, h)])
                + shifted(&[(*i, -h), (*j, -h)]))
                / (4.0 * h * h)
        }
        _ => unreachable!(),
    }
}

/// Estimates the multiplier constants C_α, |α| ≤ max_deriv ≤ 2, over the
/// product of `lambdas` and `xis` by central differences in ξ' with step
/// rel_step · (|λ|^{1/2} + |ξ'|) (type 1) or rel_step · |ξ'| (type 2).
/// A Richardson comparison against step 2h flags noise-dominated derivatives.
pub fn verify_multiplier_class<M: Fn(C64, &[f64]) -> C64>(
    m: M,
    order_s: f64,
    kind: MultiplierType,
    lambdas: &[C64],
    xis: &[Vec<f64>],
    max_deriv: usize,
    rel_step: f64,
) -> Result<MultiplierReport, SymbolError> {
    if max_deriv > 2 {
        return Err(SymbolError::DerivativeOrder(max_deriv));
    }
    if lambdas.is_empty() || xis.is_empty() {
        return Err(SymbolError::EmptyGrid);
    }
    let alphas = multi_indices(xis[0].len(), max_deriv);
    let mut consts = vec![0.0f64; alphas.len()];
    for &lambda in lambdas {
        for xi in xis {
            let a = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
            let scale = lambda.norm().sqrt() + a;
            let h = match kind {
                MultiplierType::One => rel_step * scale,
                MultiplierType::Two => rel_step * a,
            };
            let m0 = m(lambda, xi).norm();
            for (k, alpha) in alphas.iter().enumerate() {
                let order: usize = alpha.iter().sum();
                let d1 = fd_derivative(&m, lambda, xi, alpha, h);
                if order > 0 {
                    let d2 = fd_derivative(&m, lambda, xi, alpha, 2.0 * h);
                    let mismatch = (d1 - d2).norm();
                    let natural = match kind {
                        MultiplierType::One => scale,
                        MultiplierType::Two => a,
                    };
                    let floor = 1e-6 * m0 / natural.powi(order as i32);
                    if mismatch > 1e-2 * d1.norm() + floor {
                        return Err(SymbolError::StepTooSmall { step: h, mismatch });
                    }
                }
                let weight = match kind {
                    MultiplierType::One => scale.powf(order_s - order as f64),
                    MultiplierType::Two => scale.powf(order_s) * a.powi(-(order as i32)),
                };
                consts[k] = consts[k].max(d1.norm() / weight);
            }
        }
    }
    let bound = consts.iter().cloned().fold(0.0, f64::max);
    Ok(MultiplierReport {
        order_s,
        kind,
        max_deriv,
        rel_step,
        constants: alphas.into_iter().zip(consts).collect(),
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn b_examples() {
        let f0 = TangentialFrequency::new(vec![0.0, 0.0]);
        let b = compute_b(&ResolventPoint::new(C64::new(1.0, 0.0), 1.0), &f0).unwrap();
        assert!((b - 1.0).norm() < 1e-15);
        let b = compute_b(&ResolventPoint::new(C64::new(0.0, 1.0), 1.0), &f0).unwrap();
        assert!((b - C64::from_polar(1.0, PI / 4.0)).norm() < 1e-15);
    }

    #[test]
    fn b_rejects_negative_real_radicand() {
        let f0 = TangentialFrequency::new(vec![0.0, 0.0]);
        let p = ResolventPoint::new(C64::new(-2.0, 0.0), 1.0);
        assert!(matches!(compute_b(&p, &f0), Err(SymbolError::BranchAmbiguity(_))));
    }

    #[test]
    fn m_examples() {
        let b = C64::new(2.0, 0.0);
        assert_eq!(compute_m(0.0, 1.0, b), C64::new(0.0, 0.0));
        let v = compute_m(1.0, 1.0, b);
        let expect = (-2f64).exp() - (-1f64).exp();
        assert!((v.re - expect).abs() < 1e-15 && v.im == 0.0);
        assert!((v.re + 0.232544).abs() < 1e-6);
        assert!((compute_m_quadrature(1.0, 1.0, b) - v).norm() < 1e-14);
        let lim = compute_m(0.7, 1.3, C64::new(1.3, 0.0));
        assert!((lim.re + 0.7 * (-1.3f64 * 0.7).exp()).abs() < 1e-15);
    }

    #[test]
    fn d_examples() {
        assert_eq!(compute_d(1.0, C64::new(2.0, 0.0)), C64::new(17.0, 0.0));
        let b = C64::new(0.3, -1.2);
        assert!((compute_d(0.0, b) - b * b * b).norm() < 1e-15);
    }

    #[test]
    fn e_kappa_examples() {
        let p = ResolventPoint::new(C64::new(2.0, 1.0), 1.5).with_sigma(0.7);
        let f0 = TangentialFrequency::new(vec![0.0, 0.0]);
        let b = compute_b(&p, &f0).unwrap();
        let e = compute_e_kappa(&p, &f0).unwrap();
        assert!((e - 1.5 * p.lambda * b * b * b).norm() < 1e-13);
        let p0 = ResolventPoint::new(C64::new(2.0, 1.0), 1.5);
        let f = TangentialFrequency::new(vec![0.4, -1.1]);
        let b = compute_b(&p0, &f).unwrap();
        let e = compute_e_kappa(&p0, &f).unwrap();
        assert!((e - 1.5 * p0.lambda * compute_d(f.a, b)).norm() < 1e-12);
    }

    #[test]
    fn single_point_grid_is_pointwise_ratio() {
        let node = GridNode { lambda: C64::new(3.0, 4.0), a: 0.5, mu: 1.0 };
        let est = estimate_bound_constant(SymbolFunctional::ReB, Normalizer::SqrtLambdaPlusA, &[node], 1.0).unwrap();
        let b = (node.lambda + 0.25).sqrt();
        assert!((est.c_min - b.re / (5f64.sqrt() + 0.5)).abs() < 1e-15);
        assert_eq!(est.c_min, est.c_max);
    }

    #[test]
    fn empty_grid_is_an_error() {
        let r = estimate_bound_constant(SymbolFunctional::ReB, Normalizer::SqrtLambdaPlusA, &[], 1.0);
        assert_eq!(r.unwrap_err(), SymbolError::EmptyGrid);
    }

    #[test]
    fn constant_multiplier() {
        let lams = vec![C64::new(1.0, 1.0), C64::new(-3.0, 5.0)];
        let xis = vec![vec![0.3, 0.1], vec![2.0, -1.0]];
        let r = verify_multiplier_class(|_, _| C64::new(1.0, 0.0), 0.0, MultiplierType::One, &lams, &xis, 2, 1e-4).unwrap();
        assert_eq!(r.constants[0].1, 1.0);
        assert!(r.constants[1..].iter().all(|(_, c)| *c == 0.0));
    }
}
