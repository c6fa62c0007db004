//! The C² radial cutoff shared by the Volevich kernels and the
//! partial-Lagrange map: 1 on [0, 1], 0 beyond 2, quintic smoothstep between.

pub fn cutoff(t: f64) -> f64 {
    let s = t.abs();
    if s <= 1.0 {
        1.0
    } else if s >= 2.0 {
        0.0
    } else {
        let u = 2.0 - s;
        u * u * u * (10.0 - 15.0 * u + 6.0 * u * u)
    }
}

/// d/dt of [`cutoff`] for t ≥ 0.
pub fn cutoff_derivative(t: f64) -> f64 {
    let s = t.abs();
    if s <= 1.0 || s >= 2.0 {
        0.0
    } else {
        let u = 2.0 - s;
        -30.0 * u * u * (1.0 - u) * (1.0 - u) * t.signum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_matches_difference() {
        for t in [1.1, 1.5, 1.93] {
            let h = 1e-6;
            let fd = (cutoff(t + h) - cutoff(t - h)) / (2.0 * h);
            assert!((fd - cutoff_derivative(t)).abs() < 1e-8);
        }
        assert_eq!(cutoff(0.5), 1.0);
        assert_eq!(cutoff(2.5), 0.0);
    }
}
