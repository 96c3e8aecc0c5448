//! Fast transform engines.
//!
//! [`SineEngine`] applies the type-I discrete sine transform per axis via an
//! odd extension of length `4·half_steps` and a complex FFT; this is the fast
//! path diagonalizing the zero-boundary Laplacian. [`FourierEngine`] applies
//! the centred DFT used on periodic truncations, with frequencies indexed
//! symmetrically around zero. Both operate in place on row-major cubes and
//! are deliberately single-threaded: results are bitwise reproducible and
//! parallelism belongs to sweep level.

use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::scalar::{cast_usize, Real};

/// Apply `line_op` to every line of `data` along `axis`.
///
/// `data` is a row-major cube of side `n` in `d` axes; axis 0 is slowest.
fn transform_lines<T: Real>(
    data: &mut [Complex<T>],
    n: usize,
    d: usize,
    axis: usize,
    mut line_op: impl FnMut(&mut [Complex<T>]),
) {
    debug_assert_eq!(data.len(), n.pow(d as u32));
    let stride = n.pow((d - 1 - axis) as u32);
    let outer_count = n.pow(axis as u32);
    let mut line = vec![Complex::new(T::zero(), T::zero()); n];
    for outer in 0..outer_count {
        let block = outer * n * stride;
        for s in 0..stride {
            let base = block + s;
            for i in 0..n {
                line[i] = data[base + i * stride];
            }
            line_op(&mut line);
            for i in 0..n {
                data[base + i * stride] = line[i];
            }
        }
    }
}

/// Type-I sine transform of size `2·half_steps - 1` per axis.
///
/// `dst1(f)[m] = Σ_{j=1}^{M-1} f_j sin(π j m / M)` with `M = 2·half_steps`;
/// applying it twice gives `(M/2)·identity`.
pub struct SineEngine<T: Real> {
    half_steps: usize,
    fft: Arc<dyn Fft<T>>,
}

impl<T: Real> SineEngine<T> {
    pub fn new(half_steps: usize) -> Self {
        assert!(half_steps >= 1);
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft(4 * half_steps, FftDirection::Forward);
        Self { half_steps, fft }
    }

    pub fn line_len(&self) -> usize {
        2 * self.half_steps - 1
    }

    /// Unnormalized DST-I of one line, in place.
    fn dst1(&self, line: &mut [Complex<T>], ext: &mut [Complex<T>], scratch: &mut [Complex<T>]) {
        let m_count = 2 * self.half_steps; // M
        debug_assert_eq!(line.len(), m_count - 1);
        debug_assert_eq!(ext.len(), 2 * m_count);
        let zero = Complex::new(T::zero(), T::zero());
        ext[0] = zero;
        ext[m_count] = zero;
        for j in 1..m_count {
            ext[j] = line[j - 1];
            ext[2 * m_count - j] = -line[j - 1];
        }
        self.fft.process_with_scratch(ext, scratch);
        // odd symmetry: Z[m] = -2i · dst1[m]
        let half_i = Complex::new(T::zero(), T::one() / (T::one() + T::one()));
        for m in 1..m_count {
            line[m - 1] = half_i * ext[m];
        }
    }

    /// DST-I along `axis` of a row-major cube, in place, unnormalized.
    pub fn apply_axis(&self, data: &mut [Complex<T>], d: usize, axis: usize) {
        let n = self.line_len();
        let mut ext = vec![Complex::new(T::zero(), T::zero()); 4 * self.half_steps];
        let mut scratch =
            vec![Complex::new(T::zero(), T::zero()); self.fft.get_inplace_scratch_len()];
        transform_lines(data, n, d, axis, |line| {
            self.dst1(line, &mut ext, &mut scratch)
        });
    }

    /// DST-I along every axis, in place, unnormalized.
    pub fn apply_all_axes(&self, data: &mut [Complex<T>], d: usize) {
        for axis in 0..d {
            self.apply_axis(data, d, axis);
        }
    }
}

/// Direction selector for the centred DFT.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Centred DFT of even size `n` per axis.
///
/// Forward: `out[k] = Σ_i in[i] exp(-2πi (i - n/2)(k - n/2)/n)`.
/// Inverse: `out[i] = (1/n) Σ_k in[k] exp(+2πi (i - n/2)(k - n/2)/n)`.
pub struct FourierEngine<T: Real> {
    n: usize,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

impl<T: Real> FourierEngine<T> {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2 && n.is_multiple_of(2), "centred DFT needs even length");
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft(n, FftDirection::Forward);
        let inverse = planner.plan_fft(n, FftDirection::Inverse);
        Self {
            n,
            forward,
            inverse,
        }
    }

    pub fn line_len(&self) -> usize {
        self.n
    }

    fn centred(&self, line: &mut [Complex<T>], scratch: &mut [Complex<T>], dir: Direction) {
        let n = self.n;
        // global phase exp(∓2πi c²/n) with c = n/2: +1 if n ≡ 0 (mod 4), else -1
        let omega = if (n / 2).is_multiple_of(2) { T::one() } else { -T::one() };
        for (i, v) in line.iter_mut().enumerate() {
            if i % 2 == 1 {
                *v = -*v;
            }
        }
        match dir {
            Direction::Forward => self.forward.process_with_scratch(line, scratch),
            Direction::Inverse => self.inverse.process_with_scratch(line, scratch),
        }
        let norm = match dir {
            Direction::Forward => omega,
            Direction::Inverse => omega / cast_usize::<T>(n),
        };
        for (k, v) in line.iter_mut().enumerate() {
            let sign = if k % 2 == 1 { -norm } else { norm };
            *v = *v * sign;
        }
    }

    /// Centred DFT along `axis`, in place.
    pub fn apply_axis(&self, data: &mut [Complex<T>], d: usize, axis: usize, dir: Direction) {
        let scratch_len = match dir {
            Direction::Forward => self.forward.get_inplace_scratch_len(),
            Direction::Inverse => self.inverse.get_inplace_scratch_len(),
        };
        let mut scratch = vec![Complex::new(T::zero(), T::zero()); scratch_len];
        transform_lines(data, self.n, d, axis, |line| {
            self.centred(line, &mut scratch, dir)
        });
    }

    pub fn apply_all_axes(&self, data: &mut [Complex<T>], d: usize, dir: Direction) {
        for axis in 0..d {
            self.apply_axis(data, d, axis, dir);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    /// O(n²) reference DST-I.
    fn dst1_direct(input: &[Complex<f64>], m_count: usize) -> Vec<Complex<f64>> {
        (1..m_count)
            .map(|m| {
                (1..m_count)
                    .map(|j| {
                        input[j - 1] * (std::f64::consts::PI * (j * m) as f64 / m_count as f64).sin()
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn dst1_matches_direct_sum() {
        for half_steps in [1usize, 2, 3, 5, 8] {
            let engine = SineEngine::<f64>::new(half_steps);
            let n = engine.line_len();
            let mut line: Vec<Complex<f64>> = (0..n)
                .map(|i| c((i as f64 * 0.7).sin(), (i as f64 * 1.3).cos()))
                .collect();
            let expected = dst1_direct(&line, 2 * half_steps);
            engine.apply_axis(&mut line, 1, 0);
            for (a, b) in line.iter().zip(expected.iter()) {
                assert!((a - b).norm() < 1e-12, "half_steps={half_steps}");
            }
        }
    }

    #[test]
    fn dst1_twice_is_half_m_identity() {
        let half_steps = 4;
        let engine = SineEngine::<f64>::new(half_steps);
        let n = engine.line_len();
        let orig: Vec<Complex<f64>> = (0..n).map(|i| c(i as f64 + 0.5, -(i as f64))).collect();
        let mut line = orig.clone();
        engine.apply_axis(&mut line, 1, 0);
        engine.apply_axis(&mut line, 1, 0);
        let scale = (2 * half_steps) as f64 / 2.0;
        for (a, b) in line.iter().zip(orig.iter()) {
            assert!((a - b * scale).norm() < 1e-11);
        }
    }

    /// O(n²) reference centred DFT.
    fn centred_direct(input: &[Complex<f64>], sign: f64) -> Vec<Complex<f64>> {
        let n = input.len();
        let ch = n as isize / 2;
        (0..n)
            .map(|k| {
                (0..n)
                    .map(|i| {
                        let phase = sign
                            * 2.0
                            * std::f64::consts::PI
                            * ((i as isize - ch) * (k as isize - ch)) as f64
                            / n as f64;
                        input[i] * Complex::from_polar(1.0, phase)
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn centred_dft_matches_direct_sum() {
        for n in [2usize, 4, 6, 8, 10] {
            let engine = FourierEngine::<f64>::new(n);
            let input: Vec<Complex<f64>> = (0..n)
                .map(|i| c((i as f64 * 0.9).cos(), (i as f64 * 0.4).sin()))
                .collect();

            let mut fwd = input.clone();
            engine.apply_axis(&mut fwd, 1, 0, Direction::Forward);
            let expected = centred_direct(&input, -1.0);
            for (a, b) in fwd.iter().zip(expected.iter()) {
                assert!((a - b).norm() < 1e-12, "n={n}");
            }

            let mut round = fwd;
            engine.apply_axis(&mut round, 1, 0, Direction::Inverse);
            for (a, b) in round.iter().zip(input.iter()) {
                assert!((a - b).norm() < 1e-12, "n={n}");
            }
        }
    }

    #[test]
    fn axis_transforms_commute_and_separate() {
        // 2-D: applying along axis 0 then 1 equals the full 2-D direct sum.
        let n = 4;
        let engine = FourierEngine::<f64>::new(n);
        let input: Vec<Complex<f64>> = (0..n * n)
            .map(|i| c((i as f64).sin(), (2.0 + i as f64).cos()))
            .collect();
        let mut a = input.clone();
        engine.apply_all_axes(&mut a, 2, Direction::Forward);
        let mut b = input.clone();
        engine.apply_axis(&mut b, 2, 1, Direction::Forward);
        engine.apply_axis(&mut b, 2, 0, Direction::Forward);
        for (x, y) in a.iter().zip(b.iter()) {
            assert!((x - y).norm() < 1e-12);
        }
    }
}
