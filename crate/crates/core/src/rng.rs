//! The single seeded random source. Every randomized input is drawn from a
//! ChaCha8 stream keyed by (seed, stream id), so results do not depend on
//! scheduling or on how many values other consumers drew.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Independent stream `stream` of the generator seeded by `seed`.
pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.gen::<f64>()
}

/// Complex number with independent uniform(-1, 1) parts.
pub fn complex_unit_box(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0))
}

pub fn complex_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| complex_unit_box(rng)).collect()
}

/// λ in the sector {|arg λ| ≤ π − ε, λ0 ≤ |λ| ≤ λ_max}, log-uniform modulus.
pub fn sector_point(rng: &mut ChaCha8Rng, eps: f64, lambda0: f64, lambda_max: f64) -> Complex64 {
    let r = (uniform(rng, lambda0.ln(), lambda_max.ln())).exp();
    let a = uniform(rng, -(std::f64::consts::PI - eps), std::f64::consts::PI - eps);
    Complex64::from_polar(r, a)
}
