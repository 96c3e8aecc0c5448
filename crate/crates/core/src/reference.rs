//! Independent reference computations used as test oracles.
//!
//! Nothing here touches the spectral transform machinery: the free
//! Schrödinger evolution of a Gaussian is a closed form, and the ODE
//! integrator drives the coupled lattice system with the raw stencil and an
//! adaptive Dormand–Prince 5(4) scheme. These stay deliberately separate
//! from the fast paths they are used to check.

use num_complex::Complex;

use crate::calculus::{laplacian_h, laplacian_omega};
use crate::error::{CoreError, Result};
use crate::lattice::{Domain, GridFunction};
use crate::scalar::{cast, cast_usize, Real};

/// Closed-form free evolution `e^{itΔ} u0` of the Gaussian
/// `u0(x) = A exp(-|x|²/(2σ²))`:
///
/// ```text
/// u(t, x) = A (1 + 2it/σ²)^{-d/2} exp(-|x|²/(2σ² + 4it)).
/// ```
pub fn gaussian_free_solution<T: Real>(
    d: usize,
    sigma: T,
    amplitude: T,
    t: T,
    x: &[T],
) -> Complex<T> {
    let two = cast::<T>(2.0);
    let sigma2 = sigma * sigma;
    let one = Complex::new(T::one(), T::zero());
    let factor_base = one + Complex::new(T::zero(), two * t / sigma2);
    let prefactor = factor_base.powf(-cast_usize::<T>(d) / two);
    let r2: T = x.iter().map(|&v| v * v).sum();
    let denom = Complex::new(two * sigma2, cast::<T>(4.0) * t);
    let arg = -Complex::new(r2, T::zero()) / denom;
    prefactor * arg.exp() * amplitude
}

const STAGES: usize = 7;

// Dormand–Prince 5(4) tableau
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; STAGES] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; STAGES] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Adaptive Dormand–Prince integration of the full coupled lattice system
/// `i w' = -Δ w + g|w|²w` (stencil Laplacian, no transforms), from 0 to
/// `t_final`, with per-component error control.
pub fn ode_nls_solve<T: Real>(
    w0: &GridFunction<T>,
    t_final: T,
    defocusing: bool,
    rtol: T,
    atol: T,
) -> Result<GridFunction<T>> {
    let domain = *w0.domain();
    let lap = |f: &GridFunction<T>| -> Result<GridFunction<T>> {
        match domain {
            Domain::Finite(_) => laplacian_omega(f),
            Domain::Periodic(_) => laplacian_h(f),
            Domain::Continuum(_) => Err(CoreError::DomainMismatch {
                expected: "finite or periodic",
                found: "continuum",
            }),
        }
    };
    let g = if defocusing { T::one() } else { -T::one() };
    let i_unit = Complex::new(T::zero(), T::one());
    let rhs = |f: &GridFunction<T>| -> Result<Vec<Complex<T>>> {
        let lapf = lap(f)?;
        Ok(f.values()
            .iter()
            .zip(lapf.values())
            .map(|(&w, &dw)| i_unit * (dw - w * (g * w.norm_sqr())))
            .collect())
    };

    let n = w0.len();
    let mut y = w0.values().to_vec();
    let mut t = T::zero();
    let dir = if t_final > T::zero() { T::one() } else { -T::one() };
    let mut dt = dir * cast::<T>(1e-3) * t_final.abs().max(T::one());
    let mut k: Vec<Vec<Complex<T>>> = vec![vec![Complex::new(T::zero(), T::zero()); n]; STAGES];
    let mut steps = 0usize;
    let max_steps = 2_000_000usize;

    while (t_final - t) * dir > T::zero() {
        steps += 1;
        if steps > max_steps {
            return Err(CoreError::InvalidParameter(
                "reference integrator exceeded its step budget".into(),
            ));
        }
        if ((t + dt) - t_final) * dir > T::zero() {
            dt = t_final - t;
        }
        let state = GridFunction::from_values(domain, y.clone())?;
        k[0] = rhs(&state)?;
        for s in 1..STAGES - 1 {
            let mut stage = y.clone();
            for (j, kj) in k.iter().enumerate().take(s) {
                let a = cast::<T>(A[s - 1][j]);
                if a != T::zero() {
                    for (sv, kv) in stage.iter_mut().zip(kj.iter()) {
                        *sv = *sv + *kv * (a * dt);
                    }
                }
            }
            k[s] = rhs(&GridFunction::from_values(domain, stage)?)?;
        }
        // 5th-order candidate (k7 = f(y5), FSAL)
        let mut y5 = y.clone();
        for (j, kj) in k.iter().enumerate().take(STAGES - 1) {
            let b = cast::<T>(B5[j]);
            if b != T::zero() {
                for (sv, kv) in y5.iter_mut().zip(kj.iter()) {
                    *sv = *sv + *kv * (b * dt);
                }
            }
        }
        k[STAGES - 1] = rhs(&GridFunction::from_values(domain, y5.clone())?)?;

        let mut err = T::zero();
        for idx in 0..n {
            let mut diff = Complex::new(T::zero(), T::zero());
            for (j, kj) in k.iter().enumerate() {
                let db = cast::<T>(B5[j] - B4[j]);
                if db != T::zero() {
                    diff = diff + kj[idx] * (db * dt);
                }
            }
            let scale = atol + rtol * y[idx].norm().max(y5[idx].norm());
            err = err.max(diff.norm() / scale);
        }

        if err <= T::one() {
            t = t + dt;
            y = y5;
        }
        let order = cast::<T>(0.2);
        let safety = cast::<T>(0.9);
        let factor = if err == T::zero() {
            cast::<T>(5.0)
        } else {
            (safety * err.powf(-order))
                .min(cast::<T>(5.0))
                .max(cast::<T>(0.2))
        };
        dt = dt * factor;
        if dt.abs() < cast::<T>(1e-14) {
            return Err(CoreError::InvalidParameter(
                "reference integrator step collapsed".into(),
            ));
        }
    }

    GridFunction::from_values(domain, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{l2_norm, mass};
    use crate::dynamics::{linear_flow, nls_solve, Nonlinearity, SolverConfig};
    use crate::lattice::{ContinuumGrid, LatticeSpec};

    #[test]
    fn gaussian_solution_at_zero_time_is_datum() {
        let v = gaussian_free_solution(2, 1.0, 0.5, 0.0, &[0.3, -0.4]);
        let expected = 0.5 * (-0.25f64 / 2.0).exp();
        assert!((v - Complex::new(expected, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn gaussian_solution_conserves_mass() {
        // ∫|u|² over a generous grid stays constant in t
        let grid = ContinuumGrid::new(1, 0.05, 1024).unwrap();
        let m = |t: f64| {
            let f = GridFunction::from_fn(Domain::Continuum(grid), |x| {
                gaussian_free_solution(1, 1.0, 1.0, t, x)
            });
            mass(&f)
        };
        let m0 = m(0.0);
        for t in [0.1, 0.5, 1.0] {
            assert!(((m(t) - m0) / m0).abs() < 1e-10, "t={t}");
        }
    }

    #[test]
    fn continuum_linear_flow_matches_closed_form() {
        let grid = ContinuumGrid::new(1, std::f64::consts::PI / 64.0, 512).unwrap();
        let u0 = GridFunction::from_fn(Domain::Continuum(grid), |x| {
            gaussian_free_solution(1, 1.0, 1.0, 0.0, x)
        });
        let t = 0.8;
        let flowed = linear_flow(&u0, t).unwrap();
        let exact = GridFunction::from_fn(Domain::Continuum(grid), |x| {
            gaussian_free_solution(1, 1.0, 1.0, t, x)
        });
        let diff = l2_norm(&flowed.sub(&exact).unwrap());
        assert!(diff < 1e-8, "closed-form mismatch {diff}");
    }

    #[test]
    fn strang_matches_ode_oracle_single_site() {
        // d=1, 9 interior points, single-site datum
        let spec = LatticeSpec::new(1, 5, 1, 0.0).unwrap();
        let lat = spec.lattice::<f64>();
        let mut w0 = GridFunction::zeros(Domain::Finite(lat));
        w0.values_mut()[4] = Complex::new(1.0, 0.0);
        let t_final = 0.25;
        let config = SolverConfig::new(1e-4, t_final, Nonlinearity::Defocusing).unwrap();
        let strang = nls_solve(&w0, &config, &[t_final]).unwrap();
        let oracle = ode_nls_solve(&w0, t_final, true, 1e-12, 1e-12).unwrap();
        let diff = l2_norm(&strang.last().sub(&oracle).unwrap());
        assert!(diff < 1e-8, "strang vs ode oracle {diff}");
    }
}
