//! Exact-arithmetic oracles shared by the integration tests.
#![allow(dead_code)]

use fbstokes::nonlinear::FlowJet;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use std::collections::BTreeMap;

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_f64(v: &Q) -> f64 {
    use num_traits::ToPrimitive;
    v.to_f64().unwrap()
}

/// Multivariate polynomial with rational coefficients, keyed by exponent vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u32>, Q>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(e, Q::one());
        p
    }

    fn insert(&mut self, e: Vec<u32>, c: Q) {
        let entry = self.terms.entry(e.clone()).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.insert(e.clone(), c.clone());
        }
        p
    }

    pub fn scale(&self, s: &Q) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            p.insert(e.clone(), c * s);
        }
        p
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(&-Q::one()))
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.insert(e, c1 * c2);
            }
        }
        p
    }

    pub fn deriv(&self, i: usize) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                p.insert(e2, c * Q::from_integer(BigInt::from(e[i])));
            }
        }
        p
    }

    pub fn eval(&self, x: &[Q]) -> Q {
        let mut s = Q::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (xi, k) in x.iter().zip(e) {
                for _ in 0..*k {
                    m *= xi;
                }
            }
            s += m;
        }
        s
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| to_f64(c) * x.iter().zip(e).map(|(v, k)| v.powi(*k as i32)).product::<f64>())
            .sum()
    }

    /// Random polynomial of total degree ≤ `degree` in the first `spatial` variables,
    /// optionally times (1 + c t) with t the last variable.
    pub fn random<R: Rng>(rng: &mut R, nvars: usize, spatial: usize, degree: u32, scale: i64, with_time: bool) -> Poly {
        let mut p = Poly::zero(nvars);
        let mut exps = vec![vec![0u32; nvars]];
        for _ in 0..degree {
            let mut next = exps.clone();
            for e in &exps {
                for i in 0..spatial {
                    let mut e2 = e.clone();
                    e2[i] += 1;
                    if e2.iter().sum::<u32>() <= degree && !next.contains(&e2) {
                        next.push(e2);
                    }
                }
            }
            exps = next;
        }
        for e in exps {
            let c = q(rng.gen_range(-9..=9), 10 * scale);
            p.insert(e, c);
        }
        if with_time {
            let t = Poly::var(nvars, nvars - 1).scale(&q(rng.gen_range(-5..=5), 10));
            p = p.mul(&Poly::constant(nvars, Q::one()).add(&t));
        }
        p
    }
}

pub type QMat = Vec<Vec<Q>>;

/// Gauss–Jordan inverse; panics on singular input.
pub fn inverse(a: &QMat) -> QMat {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero()).expect("singular");
        m.swap(c, p);
        let piv = m[c][c].clone();
        for v in m[c].iter_mut() {
            *v = &*v / &piv;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for k in 0..2 * n {
                    let sub = &f * &m[c][k];
                    m[r][k] -= sub;
                }
            }
        }
    }
    m.into_iter().map(|r| r[n..].to_vec()).collect()
}

pub fn det(a: &QMat) -> Q {
    let n = a.len();
    if n == 1 {
        return a[0][0].clone();
    }
    let mut s = Q::zero();
    for j in 0..n {
        let minor: QMat = a[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, v)| v.clone()).collect()).collect();
        let term = &a[0][j] * det(&minor);
        if j % 2 == 0 {
            s += term;
        } else {
            s -= term;
        }
    }
    s
}

pub fn matmul(a: &QMat, b: &QMat) -> QMat {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).fold(Q::zero(), |acc, k| acc + &a[i][k] * &b[k][j])).collect())
        .collect()
}

/// Cofactor determinant of a polynomial matrix.
pub fn poly_det(a: &[Vec<Poly>]) -> Poly {
    let n = a.len();
    if n == 1 {
        return a[0][0].clone();
    }
    let nv = a[0][0].nvars;
    let mut s = Poly::zero(nv);
    for j in 0..n {
        let minor: Vec<Vec<Poly>> = a[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, v)| v.clone()).collect()).collect();
        let term = a[0][j].mul(&poly_det(&minor));
        s = if j % 2 == 0 { s.add(&term) } else { s.sub(&term) };
    }
    s
}

/// Cofactor C_ij of a polynomial matrix.
pub fn poly_cofactor(a: &[Vec<Poly>], i: usize, j: usize) -> Poly {
    let minor: Vec<Vec<Poly>> = a
        .iter()
        .enumerate()
        .filter(|(r, _)| *r != i)
        .map(|(_, row)| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect())
        .collect();
    let d = if minor.is_empty() { Poly::constant(a[0][0].nvars, Q::one()) } else { poly_det(&minor) };
    if (i + j).is_multiple_of(2) { d } else { d.scale(&-Q::one()) }
}

/// Polynomial velocity u(y, t) and displacement Ψ(y, t); variables are (y_1..y_N, t).
#[derive(Debug, Clone)]
pub struct PolyFlow {
    pub dim: usize,
    pub u: Vec<Poly>,
    pub psi: Vec<Poly>,
}

impl PolyFlow {
    pub fn random(seed: u64, dim: usize, u_degree: u32, psi_degree: u32) -> Self {
        let mut rng = fbstokes::rng::stream(seed, 99);
        let nv = dim + 1;
        Self {
            dim,
            u: (0..dim).map(|_| Poly::random(&mut rng, nv, dim, u_degree, 1, true)).collect(),
            psi: (0..dim).map(|_| Poly::random(&mut rng, nv, dim, psi_degree, 4, true)).collect(),
        }
    }

    /// K_ij = ∂_iΨ_j as polynomials.
    pub fn k_poly(&self) -> Vec<Vec<Poly>> {
        (0..self.dim).map(|i| (0..self.dim).map(|j| self.psi[j].deriv(i)).collect()).collect()
    }

    /// gvec = u − adj(I + K)ᵀ u, a polynomial.
    pub fn gvec_poly(&self) -> Vec<Poly> {
        let n = self.dim;
        let nv = n + 1;
        let a: Vec<Vec<Poly>> = self
            .k_poly()
            .iter()
            .enumerate()
            .map(|(i, r)| {
                r.iter()
                    .enumerate()
                    .map(|(j, p)| if i == j { p.add(&Poly::constant(nv, Q::one())) } else { p.clone() })
                    .collect()
            })
            .collect();
        (0..n)
            .map(|k| {
                let s = (0..n).fold(Poly::zero(nv), |acc, j| acc.add(&poly_cofactor(&a, k, j).mul(&self.u[j])));
                self.u[k].sub(&s)
            })
            .collect()
    }

    pub fn jet(&self, x: &[Q], mu: Q, rho: Q) -> FlowJet<Q> {
        let n = self.dim;
        let t = n;
        let grad = |f: &[Poly]| -> QMat { (0..n).map(|i| (0..n).map(|j| f[j].deriv(i).eval(x)).collect()).collect() };
        let hess = |f: &[Poly]| -> Vec<QMat> {
            (0..n).map(|l| (0..n).map(|i| (0..n).map(|j| f[j].deriv(i).deriv(l).eval(x)).collect()).collect()).collect()
        };
        let k = grad(&self.psi);
        let a: QMat = k.iter().enumerate().map(|(i, r)| r.iter().enumerate().map(|(j, v)| if i == j { v + Q::one() } else { v.clone() }).collect()).collect();
        let inv = inverse(&a);
        let v0 = inv.iter().enumerate().map(|(i, r)| r.iter().enumerate().map(|(j, v)| if i == j { v - Q::one() } else { v.clone() }).collect()).collect();
        FlowJet {
            u: self.u.iter().map(|p| p.eval(x)).collect(),
            grad_u: grad(&self.u),
            hess_u: hess(&self.u),
            dt_u: self.u.iter().map(|p| p.deriv(t).eval(x)).collect(),
            dk: hess(&self.psi),
            dt_psi: self.psi.iter().map(|p| p.deriv(t).eval(x)).collect(),
            j: det(&a),
            k,
            v0,
            rho_density: rho,
            mu,
        }
    }
}

/// Eulerian quantities of v(x, t) = u(y, t), x = y + Ψ(y, t), via the chain rule
/// with ∂V0 obtained by solving (I + K) X = −∂K (I + V0).
pub struct ChainRule {
    /// gx[a][i] = ∂v_i/∂x_a
    pub gx: QMat,
    /// hx[b][a][i] = ∂²v_i/∂x_b∂x_a
    pub hx: Vec<QMat>,
    pub dt_v: Vec<Q>,
}

pub fn chain_rule(jet: &FlowJet<Q>) -> ChainRule {
    let n = jet.u.len();
    let a: QMat = jet.v0.iter().enumerate().map(|(i, r)| r.iter().enumerate().map(|(j, v)| if i == j { v + Q::one() } else { v.clone() }).collect()).collect();
    let ik: QMat = jet.k.iter().enumerate().map(|(i, r)| r.iter().enumerate().map(|(j, v)| if i == j { v + Q::one() } else { v.clone() }).collect()).collect();
    let ik_inv = inverse(&ik);
    let dv0: Vec<QMat> = jet
        .dk
        .iter()
        .map(|d| {
            let rhs = matmul(d, &a);
            matmul(&ik_inv, &rhs).into_iter().map(|r| r.into_iter().map(|v| -v).collect()).collect()
        })
        .collect();
    let gx: QMat = (0..n)
        .map(|aa| (0..n).map(|i| (0..n).fold(Q::zero(), |acc, k| acc + &a[aa][k] * &jet.grad_u[k][i])).collect())
        .collect();
    let dgx = |m: usize, aa: usize, i: usize| -> Q {
        (0..n).fold(Q::zero(), |acc, k| acc + &dv0[m][aa][k] * &jet.grad_u[k][i] + &a[aa][k] * &jet.hess_u[m][k][i])
    };
    let hx: Vec<QMat> = (0..n)
        .map(|b| (0..n).map(|aa| (0..n).map(|i| (0..n).fold(Q::zero(), |acc, m| acc + &a[b][m] * dgx(m, aa, i))).collect()).collect())
        .collect();
    let dt_v = (0..n)
        .map(|i| &jet.dt_u[i] - (0..n).fold(Q::zero(), |acc, j| acc + &jet.dt_psi[j] * &gx[j][i]))
        .collect();
    ChainRule { gx, hx, dt_v }
}

/// f from (I + K)[ρ(∂_t v + v·∇v) − μ Div D(v)] = ρ∂_t u − μ Div_y D(u) − f.
pub fn f_oracle(jet: &FlowJet<Q>) -> Vec<Q> {
    let n = jet.u.len();
    let c = chain_rule(jet);
    let m: Vec<Q> = (0..n)
        .map(|i| {
            let conv = (0..n).fold(Q::zero(), |acc, j| acc + &jet.u[j] * &c.gx[j][i]);
            let div_d = (0..n).fold(Q::zero(), |acc, j| acc + &c.hx[j][j][i] + &c.hx[j][i][j]);
            &jet.rho_density * (&c.dt_v[i] + conv) - &jet.mu * div_d
        })
        .collect();
    (0..n)
        .map(|mm| {
            let lhs = (0..n).fold(Q::zero(), |acc, i| {
                let delta = if mm == i { Q::one() } else { Q::zero() };
                acc + (delta + &jet.k[mm][i]) * &m[i]
            });
            let div_d_y = (0..n).fold(Q::zero(), |acc, j| acc + &jet.hess_u[j][j][mm] + &jet.hess_u[j][mm][j]);
            &jet.rho_density * &jet.dt_u[mm] - &jet.mu * div_d_y - lhs
        })
        .collect()
}

/// g = div u − J div_x v.
pub fn g_oracle(jet: &FlowJet<Q>) -> Q {
    let n = jet.u.len();
    let c = chain_rule(jet);
    let div_y = (0..n).fold(Q::zero(), |acc, i| acc + &jet.grad_u[i][i]);
    let div_x = (0..n).fold(Q::zero(), |acc, i| acc + &c.gx[i][i]);
    div_y - &jet.j * div_x
}

use fbstokes::transforms::VectorField;
use nalgebra::{DMatrix, DVector};

/// f64 field backed by polynomials in (y, t), with analytic derivatives.
pub fn poly_field(polys: &[Poly]) -> VectorField {
    let n = polys.len();
    let t = n;
    let val = polys.to_vec();
    let grad: Vec<Vec<Poly>> = (0..n).map(|i| (0..n).map(|j| polys[j].deriv(i)).collect()).collect();
    let hess: Vec<Vec<Vec<Poly>>> = (0..n)
        .map(|l| (0..n).map(|i| (0..n).map(|j| polys[j].deriv(i).deriv(l)).collect()).collect())
        .collect();
    let dt: Vec<Poly> = polys.iter().map(|p| p.deriv(t)).collect();
    let at = |y: &[f64], s: f64| {
        let mut x = y.to_vec();
        x.push(s);
        x
    };
    VectorField::new(
        n,
        move |y, s| DVector::from_fn(n, |i, _| val[i].eval_f64(&at(y, s))),
        move |y, s| DMatrix::from_fn(n, n, |i, j| grad[i][j].eval_f64(&at(y, s))),
    )
    .with_hess(move |y, s| (0..n).map(|l| DMatrix::from_fn(n, n, |i, j| hess[l][i][j].eval_f64(&at(y, s)))).collect())
    .with_dt(move |y, s| DVector::from_fn(n, |i, _| dt[i].eval_f64(&at(y, s))))
}

pub fn trig_field(seed: u64, dim: usize, amp: f64) -> VectorField {
    VectorField::trigonometric(seed, dim, amp)
}

/// Least-squares slope of log(err) against log(step).
pub fn slope(rows: &[(f64, f64)]) -> f64 {
    fbstokes::transforms::fitted_order(rows)
}
