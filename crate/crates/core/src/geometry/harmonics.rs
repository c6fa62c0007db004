//! Real spherical harmonics on S², evaluated together with their θ/φ
//! derivatives up to second order.

use crate::quadrature::SphereRule;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

/// Second-order jet in one variable: (f, f′, f″).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet1(pub f64, pub f64, pub f64);

impl Jet1 {
    pub fn constant(c: f64) -> Self {
        Jet1(c, 0.0, 0.0)
    }
    pub fn scale(self, c: f64) -> Self {
        Jet1(c * self.0, c * self.1, c * self.2)
    }
}

impl Add for Jet1 {
    type Output = Jet1;
    fn add(self, o: Jet1) -> Jet1 {
        Jet1(self.0 + o.0, self.1 + o.1, self.2 + o.2)
    }
}

impl Sub for Jet1 {
    type Output = Jet1;
    fn sub(self, o: Jet1) -> Jet1 {
        Jet1(self.0 - o.0, self.1 - o.1, self.2 - o.2)
    }
}

impl Mul for Jet1 {
    type Output = Jet1;
    fn mul(self, o: Jet1) -> Jet1 {
        Jet1(
            self.0 * o.0,
            self.1 * o.0 + self.0 * o.1,
            self.2 * o.0 + 2.0 * self.1 * o.1 + self.0 * o.2,
        )
    }
}

/// A function of (θ, φ) with derivatives through second order.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RadialJet {
    pub v: f64,
    pub t: f64,
    pub p: f64,
    pub tt: f64,
    pub tp: f64,
    pub pp: f64,
}

impl RadialJet {
    pub fn constant(c: f64) -> Self {
        Self { v: c, ..Default::default() }
    }

    fn outer(a: Jet1, b: Jet1) -> Self {
        Self {
            v: a.0 * b.0,
            t: a.1 * b.0,
            p: a.0 * b.1,
            tt: a.2 * b.0,
            tp: a.1 * b.1,
            pp: a.0 * b.2,
        }
    }

    pub fn scaled(self, c: f64) -> Self {
        Self {
            v: c * self.v,
            t: c * self.t,
            p: c * self.p,
            tt: c * self.tt,
            tp: c * self.tp,
            pp: c * self.pp,
        }
    }

    pub fn plus(self, o: Self) -> Self {
        Self {
            v: self.v + o.v,
            t: self.t + o.t,
            p: self.p + o.p,
            tt: self.tt + o.tt,
            tp: self.tp + o.tp,
            pp: self.pp + o.pp,
        }
    }
}

/// Associated Legendre P_l^m(cos θ) (no Condon–Shortley phase) as a jet in θ.
fn legendre_jet(l: usize, m: usize, theta: f64) -> Jet1 {
    let (s, c) = theta.sin_cos();
    let x = Jet1(c, -s, -c);
    let sj = Jet1(s, c, -s);
    let mut pmm = Jet1::constant(1.0);
    for k in 0..m {
        pmm = (pmm * sj).scale((2 * k + 1) as f64);
    }
    if l == m {
        return pmm;
    }
    let mut prev = pmm;
    let mut cur = (x * pmm).scale((2 * m + 1) as f64);
    for ll in (m + 2)..=l {
        let next = ((x * cur).scale((2 * ll - 1) as f64) - prev.scale((ll + m - 1) as f64)).scale(1.0 / (ll - m) as f64);
        prev = cur;
        cur = next;
    }
    cur
}

fn normalization(l: usize, m: usize) -> f64 {
    // (l−m)!/(l+m)! accumulated as a product to stay in range.
    let ratio: f64 = ((l - m + 1)..=(l + m)).map(|k| 1.0 / k as f64).product();
    ((2 * l + 1) as f64 / (4.0 * PI) * ratio).sqrt()
}

/// Orthonormal real harmonic Y_{l,m}: m > 0 uses cos(mφ), m < 0 uses sin(|m|φ).
pub fn real_harmonic(l: usize, m: i64, theta: f64, phi: f64) -> RadialJet {
    let am = m.unsigned_abs() as usize;
    assert!(am <= l, "|m| must not exceed l");
    let p = legendre_jet(l, am, theta);
    let mf = am as f64;
    let angular = if m == 0 {
        Jet1::constant(1.0)
    } else if m > 0 {
        let (s, c) = (mf * phi).sin_cos();
        Jet1(c, -mf * s, -mf * mf * c)
    } else {
        let (s, c) = (mf * phi).sin_cos();
        Jet1(s, mf * c, -mf * mf * s)
    };
    let norm = normalization(l, am) * if m == 0 { 1.0 } else { std::f64::consts::SQRT_2 };
    RadialJet::outer(p, angular).scaled(norm)
}

/// Finite real-harmonic expansion Σ c_{lm} Y_{l,m}.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SphericalExpansion {
    pub terms: Vec<(usize, i64, f64)>,
}

impl SphericalExpansion {
    pub fn new(terms: Vec<(usize, i64, f64)>) -> Self {
        Self { terms }
    }

    pub fn eval(&self, theta: f64, phi: f64) -> RadialJet {
        self.terms
            .iter()
            .fold(RadialJet::default(), |acc, &(l, m, c)| acc.plus(real_harmonic(l, m, theta, phi).scaled(c)))
    }

    /// L² projection of `f` onto degrees ≤ lmax, exact for band-limited input.
    pub fn project<F: Fn(f64, f64) -> f64>(f: F, lmax: usize) -> Self {
        let rule = SphereRule::for_degree(2 * lmax + 2);
        let values: Vec<f64> = rule.points.iter().map(|&(t, p, _)| f(t, p)).collect();
        let mut terms = Vec::new();
        for l in 0..=lmax {
            for m in -(l as i64)..=(l as i64) {
                let c: f64 = rule
                    .points
                    .iter()
                    .zip(&values)
                    .map(|(&(t, p, w), v)| w * v * real_harmonic(l, m, t, p).v)
                    .sum();
                terms.push((l, m, c));
            }
        }
        Self { terms }
    }

    pub fn max_degree(&self) -> usize {
        self.terms.iter().map(|t| t.0).max().unwrap_or(0)
    }
}
