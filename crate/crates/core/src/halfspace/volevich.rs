use super::SolveError;
use crate::quadrature::composite_gauss_legendre;
use crate::symbols::{compute_b, compute_m, principal_sqrt, ResolventPoint, TangentialFrequency};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

/// Kernel shapes K(x_N + y_N) of the half-space integral operators
/// ∫₀^∞ m(λ, ξ') K(x_N + y_N) ĝ(ξ', y_N) dy_N.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VolevichKernel {
    /// λ^{1/2} e^{−B(x+y)}
    Resolvent,
    /// A e^{−B(x+y)}
    L1,
    /// A e^{−A(x+y)}
    L2,
    /// A² 𝓜(x+y)
    L3,
    /// λ^{1/2} A 𝓜(x+y)
    L4,
    /// φ(x) e^{−A(x+y)} ψ(y)
    L6,
    /// φ(x) A e^{−A(x+y)} ψ(y)
    L7,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolevichReport {
    pub kernel: VolevichKernel,
    pub rule: String,
    /// Truncation point of the y_N integral for each ξ'.
    pub truncation: Vec<f64>,
    pub nodes_per_frequency: Vec<usize>,
}

pub use crate::cutoff::cutoff;

const GL_ORDER: usize = 16;

/// Applies the named kernel at every (ξ', x_N). The y_N integral is a
/// composite 16-point Gauss–Legendre rule on [0, T] with T = 40/Re B for the
/// e^{−B} kernels, T = 40/min(Re B, A) for kernels that decay like e^{−A},
/// and T = 2 (cutoff support) for L6/L7.
pub fn apply_volevich_operator<M, G>(
    kind: VolevichKernel,
    point: &ResolventPoint,
    xis: &[Vec<f64>],
    xs: &[f64],
    m: M,
    g: G,
) -> Result<(Vec<Vec<C64>>, VolevichReport), SolveError>
where
    M: Fn(C64, &[f64]) -> C64,
    G: Fn(&[f64], f64) -> C64,
{
    if xis.is_empty() || xs.is_empty() {
        return Err(SolveError::EmptyGrid);
    }
    let sqrt_lambda = principal_sqrt(point.lambda)?;
    let mut out = Vec::with_capacity(xis.len());
    let mut truncation = Vec::with_capacity(xis.len());
    let mut nodes = Vec::with_capacity(xis.len());
    for xi in xis {
        let freq = TangentialFrequency::new(xi.clone());
        let a = freq.a;
        let b = compute_b(point, &freq)?;
        let mult = m(point.lambda, xi);
        let t = match kind {
            VolevichKernel::Resolvent | VolevichKernel::L1 => 40.0 / b.re,
            VolevichKernel::L2 | VolevichKernel::L3 | VolevichKernel::L4 => {
                if a > 0.0 {
                    40.0 / b.re.min(a)
                } else {
                    40.0 / b.re
                }
            }
            VolevichKernel::L6 | VolevichKernel::L7 => 2.0,
        };
        let oscillation = t * (b.norm() + a);
        let panels = (oscillation / 2.0).ceil().max(16.0) as usize;
        let rule = composite_gauss_legendre(panels, GL_ORDER, 0.0, t);
        let gy: Vec<C64> = rule.nodes.iter().map(|&y| g(xi, y)).collect();
        let kernel = |s: f64| -> C64 {
            match kind {
                VolevichKernel::Resolvent => sqrt_lambda * (-b * s).exp(),
                VolevichKernel::L1 => a * (-b * s).exp(),
                VolevichKernel::L2 => C64::new(a * (-a * s).exp(), 0.0),
                VolevichKernel::L3 => a * a * compute_m(s, a, b),
                VolevichKernel::L4 => sqrt_lambda * a * compute_m(s, a, b),
                VolevichKernel::L6 => C64::new((-a * s).exp(), 0.0),
                VolevichKernel::L7 => C64::new(a * (-a * s).exp(), 0.0),
            }
        };
        let row: Vec<C64> = xs
            .iter()
            .map(|&x| {
                let outer = match kind {
                    VolevichKernel::L6 | VolevichKernel::L7 => cutoff(x),
                    _ => 1.0,
                };
                let s: C64 = rule
                    .nodes
                    .iter()
                    .zip(&rule.weights)
                    .zip(&gy)
                    .map(|((&y, &w), gv)| {
                        let inner = match kind {
                            VolevichKernel::L6 | VolevichKernel::L7 => cutoff(y),
                            _ => 1.0,
                        };
                        w * inner * kernel(x + y) * gv
                    })
                    .sum();
                mult * outer * s
            })
            .collect();
        out.push(row);
        truncation.push(t);
        nodes.push(rule.len());
    }
    Ok((
        out,
        VolevichReport {
            kernel: kind,
            rule: format!("composite Gauss-Legendre, {GL_ORDER} points per panel"),
            truncation,
            nodes_per_frequency: nodes,
        },
    ))
}
