//! The experiment runners, one module per CLI subcommand.

pub mod commutator;
pub mod converge;
pub mod dispersive;
pub mod linfty;
pub mod small_amplitude;
pub mod solve;
pub mod spectral_check;
pub mod strichartz;
pub mod weighted_growth;

use num_complex::Complex;

use dnls_core::dynamics::Trajectory;
use dnls_core::lattice::GridFunction;
use dnls_core::spectral::{symbol_ph, SineBasis};

use crate::HarnessError;

/// Sample the exact linear flow `e^{itΔ_Ω} w0` at many times with one
/// forward transform: per-time phase multiply plus inverse.
pub(crate) fn linear_flow_samples(
    w0: &GridFunction<f64>,
    times: &[f64],
) -> Result<Trajectory<f64>, HarnessError> {
    let lat = *w0.domain().as_finite()?;
    let basis = SineBasis::new(lat);
    let coeffs = basis.forward(w0)?;
    let d = lat.dim();
    let idx = lat.indexer();
    let mut freq_symbols = Vec::with_capacity(idx.len());
    for (_, mi) in idx.iter() {
        let mut xi = [0.0f64; dnls_core::lattice::MAX_DIM];
        for j in 0..d {
            xi[j] = lat.frequency(mi[j] + 1);
        }
        freq_symbols.push(symbol_ph(lat.spacing(), &xi[..d]));
    }
    let mut states = Vec::with_capacity(times.len());
    for &t in times {
        let mut c = coeffs.clone();
        for (v, p) in c.coeffs_mut().iter_mut().zip(freq_symbols.iter()) {
            *v *= Complex::from_polar(1.0, -t * p);
        }
        states.push(basis.inverse(&c)?);
    }
    Trajectory::new(times.to_vec(), states).map_err(HarnessError::from)
}

/// Uniform time grid `0 = t_0 < … < t_n = t_final` with `n` intervals.
pub(crate) fn uniform_times(t_final: f64, intervals: usize) -> Vec<f64> {
    (0..=intervals)
        .map(|i| t_final * i as f64 / intervals as f64)
        .collect()
}

/// Millisecond stopwatch for the summary timings.
pub(crate) fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = std::time::Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64() * 1e3)
}
