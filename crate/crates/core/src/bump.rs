//! Smooth cutoff profiles built from `exp(-1/t)` splines.
//!
//! `smooth_step` rises from 0 to 1 across `[0,1]`; `radial_profile` is 1 on
//! `[0,1]` and 0 on `[2,∞)`. The exact shape is free in principle; it is
//! fixed here so measured constants are reproducible.

use crate::scalar::Real;

fn exp_spline<T: Real>(t: T) -> T {
    if t <= T::zero() {
        T::zero()
    } else {
        (-t.recip()).exp()
    }
}

/// C^∞ step: 0 for `t ≤ 0`, 1 for `t ≥ 1`, strictly increasing between.
pub fn smooth_step<T: Real>(t: T) -> T {
    let a = exp_spline(t);
    let b = exp_spline(T::one() - t);
    if a == T::zero() {
        T::zero()
    } else {
        a / (a + b)
    }
}

/// Radial plateau profile: 1 on `r ≤ 1`, 0 on `r ≥ 2`, monotone between.
pub fn radial_profile<T: Real>(r: T) -> T {
    smooth_step(T::from_f64(2.0).unwrap() - r)
}

/// Cube plateau `ψ̃`: 1 on `[-1,1]^d`, 0 off `[-2,2]^d`, via the sup norm.
pub fn cube_plateau<T: Real>(xi: &[T]) -> T {
    let sup = xi
        .iter()
        .map(|x| x.abs())
        .fold(T::zero(), |a, b| a.max(b));
    radial_profile(sup)
}

/// Dyadic annulus cutoff `ψ = ψ̃(·) - ψ̃(2·)`.
pub fn cube_annulus<T: Real>(xi: &[T]) -> T {
    let two = T::from_f64(2.0).unwrap();
    let doubled: Vec<T> = xi.iter().map(|&x| x * two).collect();
    cube_plateau(xi) - cube_plateau(&doubled)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_endpoints_and_monotonicity() {
        assert_eq!(smooth_step(-1.0f64), 0.0);
        assert_eq!(smooth_step(0.0f64), 0.0);
        assert_eq!(smooth_step(1.0f64), 1.0);
        assert_eq!(smooth_step(2.0f64), 1.0);
        let mut prev = 0.0;
        for i in 0..=100 {
            let v = smooth_step(i as f64 / 100.0);
            assert!(v >= prev - 1e-15);
            assert!((0.0..=1.0).contains(&v));
            prev = v;
        }
    }

    #[test]
    fn profile_plateau_and_support() {
        assert_eq!(radial_profile(0.0f64), 1.0);
        assert_eq!(radial_profile(1.0f64), 1.0);
        assert_eq!(radial_profile(2.0f64), 0.0);
        assert_eq!(radial_profile(3.5f64), 0.0);
        let mid = radial_profile(1.5f64);
        assert!(mid > 0.0 && mid < 1.0);
    }

    #[test]
    fn annulus_telescopes() {
        // Σ_{levels} ψ(ξ/2^ℓ) telescopes to ψ̃(ξ) - ψ̃(ξ/2^{ℓmin * ...})
        let xi = [0.7f64, -1.3];
        let mut sum = 0.0;
        for level in -20..=0 {
            let scale = (2.0f64).powi(-level);
            let scaled = [xi[0] * scale, xi[1] * scale];
            sum += cube_annulus(&scaled);
        }
        // ξ inside [-2,2]^d and away from 0: telescoping sum = ψ̃(ξ)
        assert!((sum - cube_plateau(&xi)).abs() < 1e-14);
    }
}
