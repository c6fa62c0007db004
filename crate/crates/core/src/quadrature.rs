//! Quadrature rules shared by the solvers and checks.

use gauss_quad::GaussLegendre;
use std::f64::consts::PI;

/// Nodes and weights of a one-dimensional rule on a finite interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Gauss–Legendre rule with `n` points on `[a, b]`, nodes ascending.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Rule {
    let n = n.max(2);
    let mut pairs = GaussLegendre::new(n)
        .expect("degree >= 2")
        .into_node_weight_pairs();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    Rule {
        nodes: pairs.iter().map(|p| mid + half * p.0).collect(),
        weights: pairs.iter().map(|p| half * p.1).collect(),
    }
}

/// Composite Gauss–Legendre: `panels` equal panels of `order` points each.
pub fn composite_gauss_legendre(panels: usize, order: usize, a: f64, b: f64) -> Rule {
    let panels = panels.max(1);
    let base = gauss_legendre(order, 0.0, 1.0);
    let h = (b - a) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * base.len());
    let mut weights = Vec::with_capacity(panels * base.len());
    for p in 0..panels {
        let x0 = a + p as f64 * h;
        for (x, w) in base.nodes.iter().zip(&base.weights) {
            nodes.push(x0 + h * x);
            weights.push(h * w);
        }
    }
    Rule { nodes, weights }
}

/// Chebyshev–Lobatto points mapped to `[a, b]`, ascending.
pub fn chebyshev_points(n: usize, a: f64, b: f64) -> Vec<f64> {
    if n == 1 {
        return vec![0.5 * (a + b)];
    }
    (0..n)
        .map(|k| {
            let t = -(PI * k as f64 / (n - 1) as f64).cos();
            0.5 * (a + b) + 0.5 * (b - a) * t
        })
        .collect()
}

/// Product rule on the unit sphere in R^3: Gauss–Legendre in cos θ times
/// a uniform φ grid. Exact for spherical polynomials of degree < 2 n_theta
/// when n_phi ≥ 2 n_theta.
#[derive(Debug, Clone)]
pub struct SphereRule {
    /// (θ, φ, weight) triples; weights sum to 4π.
    pub points: Vec<(f64, f64, f64)>,
}

impl SphereRule {
    pub fn new(n_theta: usize, n_phi: usize) -> Self {
        let gl = gauss_legendre(n_theta, -1.0, 1.0);
        let dphi = 2.0 * PI / n_phi as f64;
        let mut points = Vec::with_capacity(n_theta * n_phi);
        for (z, w) in gl.nodes.iter().zip(&gl.weights) {
            let theta = z.clamp(-1.0, 1.0).acos();
            for k in 0..n_phi {
                points.push((theta, k as f64 * dphi, w * dphi));
            }
        }
        Self { points }
    }

    /// Rule exact through spherical-harmonic degree `2 * lmax`.
    pub fn for_degree(lmax: usize) -> Self {
        let n = lmax + 2;
        Self::new(n, 2 * n + 1)
    }

    pub fn integrate<F: FnMut(f64, f64) -> f64>(&self, mut f: F) -> f64 {
        self.points.iter().map(|&(t, p, w)| w * f(t, p)).sum()
    }
}

/// Unit-sphere rule in R^N for N = 2 (uniform circle) or N = 3.
/// Points are unit vectors with weights summing to |S^{N-1}|.
pub fn unit_sphere_points(dim: usize, resolution: usize) -> Vec<(Vec<f64>, f64)> {
    match dim {
        2 => {
            let n = 2 * resolution + 2;
            let d = 2.0 * PI / n as f64;
            (0..n)
                .map(|k| {
                    let a = k as f64 * d;
                    (vec![a.cos(), a.sin()], d)
                })
                .collect()
        }
        3 => SphereRule::for_degree(resolution)
            .points
            .iter()
            .map(|&(t, p, w)| (spherical_unit(t, p).to_vec(), w))
            .collect(),
        _ => panic!("unit_sphere_points supports N = 2 or 3"),
    }
}

/// ω(θ, φ) = (cos φ sin θ, sin φ sin θ, cos θ).
pub fn spherical_unit(theta: f64, phi: f64) -> [f64; 3] {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [cp * st, sp * st, ct]
}

/// Tensor rule on the ball B_R ⊂ R^N: Gauss–Legendre in r with weight
/// r^{N-1}, times the unit-sphere rule.
#[derive(Debug, Clone)]
pub struct BallRule {
    pub dim: usize,
    pub radius: f64,
    pub points: Vec<(Vec<f64>, f64)>,
}

impl BallRule {
    pub fn new(dim: usize, radius: f64, n_radial: usize, angular_resolution: usize) -> Self {
        let radial = gauss_legendre(n_radial, 0.0, radius);
        let sphere = unit_sphere_points(dim, angular_resolution);
        let mut points = Vec::with_capacity(radial.len() * sphere.len());
        for (r, wr) in radial.nodes.iter().zip(&radial.weights) {
            let jac = r.powi(dim as i32 - 1);
            for (omega, ws) in &sphere {
                points.push((omega.iter().map(|c| r * c).collect(), wr * jac * ws));
            }
        }
        Self {
            dim,
            radius,
            points,
        }
    }

    pub fn integrate<F: FnMut(&[f64]) -> f64>(&self, mut f: F) -> f64 {
        self.points.iter().map(|(y, w)| w * f(y)).sum()
    }

    pub fn volume(&self) -> f64 {
        ball_volume(self.dim, self.radius)
    }
}

/// |S^{N-1}| for N = 2, 3.
pub fn sphere_area(dim: usize) -> f64 {
    match dim {
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        _ => panic!("sphere_area supports N = 2 or 3"),
    }
}

/// |B_R| in R^N for N = 2, 3.
pub fn ball_volume(dim: usize, radius: f64) -> f64 {
    sphere_area(dim) * radius.powi(dim as i32) / dim as f64
}
