//! Eigenbasis of the zero-boundary Laplacian, eigen-transforms, dyadic
//! frequency projections, and Fourier multipliers on the periodic truncation.
//!
//! On the finite lattice, `-Δ_Ω` is diagonalized by products of sines
//!
//! ```text
//! e(x, ξ) = L^{-d/2} ∏_j sin((x_j + L) ξ_j),   ξ_j = m_j π / (2L),  m_j = 1 .. 2H-1,
//! ```
//!
//! with `L` the half-side and `H` the step count per half-side (for the
//! standard spec `L = πR`, `ξ_j = m_j/(2R)`). The eigenvalue is the symbol
//! `P_h(ξ) = Σ_j (4/h²) sin²(h ξ_j / 2)`. The inner product carries the
//! `h^d` weight, `⟨f,g⟩ = h^d Σ f ḡ`, which makes the basis orthonormal.
//!
//! The fast transform path is a separable DST-I per axis; the direct
//! summation path is retained as the correctness oracle.

use num_complex::Complex;

use crate::bump::{cube_annulus, cube_plateau};
use crate::dst::{Direction, FourierEngine, SineEngine};
use crate::error::{CoreError, Result};
use crate::lattice::{Domain, FiniteLattice, GridFunction, PeriodicLattice, MAX_DIM};
use crate::scalar::{cast, cast_usize, Real};

/// Symbol of `-Δ` on either lattice: `P_h(ξ) = Σ_j (4/h²) sin²(h ξ_j / 2)`.
pub fn symbol_ph<T: Real>(h: T, xi: &[T]) -> T {
    let four = cast::<T>(4.0);
    let two = cast::<T>(2.0);
    xi.iter()
        .map(|&x| four / (h * h) * (h * x / two).sin().powi(2))
        .sum()
}

/// Gradient component of the symbol: `∂_j P_h(ξ) = (2/h) sin(h ξ_j)`.
pub fn symbol_ph_gradient<T: Real>(h: T, xi_j: T) -> T {
    cast::<T>(2.0) / h * (h * xi_j).sin()
}

/// Eigenfunction value `e(x, ξ_m)` at a real point `x` (not necessarily a
/// lattice node). Frequency components with `m_j = 0` or `m_j = 2H` are on
/// the frequency boundary and the eigenfunction is taken identically zero.
pub fn eigenfunction<T: Real>(lattice: &FiniteLattice<T>, x: &[T], m: &[usize]) -> Result<T> {
    let d = lattice.dim();
    if x.len() != d || m.len() != d {
        return Err(CoreError::InvalidParameter(
            "coordinate/frequency arity mismatch".into(),
        ));
    }
    let half = lattice.half_side();
    let tol = cast::<T>(1e-9) * lattice.spacing();
    for &xv in x {
        if xv.abs() > half + tol {
            return Err(CoreError::OutOfDomain);
        }
    }
    let boundary_m = 2 * lattice.half_steps();
    for &mj in m {
        if mj == 0 || mj == boundary_m {
            return Ok(T::zero());
        }
        if mj > boundary_m {
            return Err(CoreError::InvalidParameter(format!(
                "frequency integer {mj} outside 0..={boundary_m}"
            )));
        }
    }
    let norm = half.powf(-cast_usize::<T>(d) / cast::<T>(2.0));
    let mut value = norm;
    for j in 0..d {
        let xi = lattice.frequency(m[j]);
        value = value * ((x[j] + half) * xi).sin();
    }
    Ok(value)
}

/// Sample `e(·, ξ_m)` on the interior grid.
pub fn eigenfunction_grid<T: Real>(
    lattice: &FiniteLattice<T>,
    m: &[usize],
) -> Result<GridFunction<T>> {
    let d = lattice.dim();
    if m.len() != d {
        return Err(CoreError::InvalidParameter(
            "frequency arity mismatch".into(),
        ));
    }
    let boundary_m = 2 * lattice.half_steps();
    for &mj in m {
        if mj > boundary_m {
            return Err(CoreError::InvalidParameter(format!(
                "frequency integer {mj} outside 0..={boundary_m}"
            )));
        }
    }
    // tabulate the 1-D sine factors once per axis value
    let n = lattice.interior_per_axis();
    let half = lattice.half_side();
    let mut axis_tables: Vec<Vec<T>> = Vec::with_capacity(d);
    for j in 0..d {
        if m[j] == 0 || m[j] == boundary_m {
            axis_tables.push(vec![T::zero(); n]);
            continue;
        }
        let xi = lattice.frequency(m[j]);
        axis_tables.push(
            (0..n)
                .map(|i| ((lattice.coord(i) + half) * xi).sin())
                .collect(),
        );
    }
    let norm = half.powf(-cast_usize::<T>(d) / cast::<T>(2.0));
    let idx = lattice.indexer();
    let mut values = Vec::with_capacity(idx.len());
    for (_, mi) in idx.iter() {
        let mut v = norm;
        for j in 0..d {
            v = v * axis_tables[j][mi[j]];
        }
        values.push(Complex::new(v, T::zero()));
    }
    GridFunction::from_values(Domain::Finite(*lattice), values)
}

/// Eigen-expansion coefficients `⟨f, e(·,ξ)⟩` indexed by `Ω*` in the same
/// row-major order as interior points.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCoeffs<T> {
    lattice: FiniteLattice<T>,
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> SpectralCoeffs<T> {
    pub fn from_values(lattice: FiniteLattice<T>, coeffs: Vec<Complex<T>>) -> Result<Self> {
        if coeffs.len() != lattice.interior_len() {
            return Err(CoreError::ShapeMismatch {
                expected: lattice.interior_len(),
                found: coeffs.len(),
            });
        }
        Ok(Self { lattice, coeffs })
    }

    pub fn lattice(&self) -> &FiniteLattice<T> {
        &self.lattice
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex<T>> {
        self.coeffs
    }

    /// `(Σ |c|²)^{1/2}`; equals `‖f‖_{L²(Ω)}` by Parseval.
    pub fn l2_norm(&self) -> T {
        self.coeffs
            .iter()
            .map(|c| c.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt()
    }
}

/// Reusable eigen-transform plan for one finite lattice.
pub struct SineBasis<T: Real> {
    lattice: FiniteLattice<T>,
    engine: SineEngine<T>,
}

impl<T: Real> SineBasis<T> {
    pub fn new(lattice: FiniteLattice<T>) -> Self {
        let engine = SineEngine::new(lattice.half_steps());
        Self { lattice, engine }
    }

    pub fn lattice(&self) -> &FiniteLattice<T> {
        &self.lattice
    }

    /// `⟨f, e(·,ξ)⟩ = h^d Σ_x f(x) e(x,ξ)` for all `ξ ∈ Ω*`, fast path.
    pub fn forward(&self, f: &GridFunction<T>) -> Result<SpectralCoeffs<T>> {
        let lat = f.domain().as_finite()?;
        if *lat != self.lattice {
            return Err(CoreError::InvalidParameter(
                "grid function lattice differs from plan lattice".into(),
            ));
        }
        let d = lat.dim();
        let mut work = f.values().to_vec();
        self.engine.apply_all_axes(&mut work, d);
        // per-axis factor h / sqrt(L)
        let factor = (lat.spacing() / lat.half_side().sqrt()).powi(d as i32);
        for v in &mut work {
            *v = *v * factor;
        }
        SpectralCoeffs::from_values(*lat, work)
    }

    /// `f(x) = Σ_ξ c(ξ) e(x,ξ)`, fast path.
    pub fn inverse(&self, c: &SpectralCoeffs<T>) -> Result<GridFunction<T>> {
        if c.lattice != self.lattice {
            return Err(CoreError::InvalidParameter(
                "coefficient lattice differs from plan lattice".into(),
            ));
        }
        let d = self.lattice.dim();
        let mut work = c.coeffs().to_vec();
        self.engine.apply_all_axes(&mut work, d);
        let factor = self.lattice.half_side().sqrt().recip().powi(d as i32);
        for v in &mut work {
            *v = *v * factor;
        }
        GridFunction::from_values(Domain::Finite(self.lattice), work)
    }
}

/// Fast forward transform (constructs a throwaway plan).
pub fn forward<T: Real>(f: &GridFunction<T>) -> Result<SpectralCoeffs<T>> {
    let lat = f.domain().as_finite()?;
    SineBasis::new(*lat).forward(f)
}

/// Fast inverse transform (constructs a throwaway plan).
pub fn inverse<T: Real>(c: &SpectralCoeffs<T>) -> Result<GridFunction<T>> {
    SineBasis::new(*c.lattice()).inverse(c)
}

/// Direct `O(n²)` forward summation; the correctness oracle for the fast path.
pub fn forward_direct<T: Real>(f: &GridFunction<T>) -> Result<SpectralCoeffs<T>> {
    let lat = *f.domain().as_finite()?;
    let d = lat.dim();
    let idx = lat.indexer();
    let hd = lat.spacing().powi(d as i32);
    let mut coeffs = vec![Complex::new(T::zero(), T::zero()); idx.len()];
    for (flin, fm) in idx.iter() {
        let mut m1 = [0usize; MAX_DIM];
        for j in 0..d {
            m1[j] = fm[j] + 1;
        }
        let mut acc = Complex::new(T::zero(), T::zero());
        for (xlin, xm) in idx.iter() {
            let x = lat.point(&xm);
            let e = eigenfunction(&lat, &x[..d], &m1[..d])?;
            acc = acc + f.values()[xlin] * e;
        }
        coeffs[flin] = acc * hd;
    }
    SpectralCoeffs::from_values(lat, coeffs)
}

/// Direct `O(n²)` inverse summation; the correctness oracle for the fast path.
pub fn inverse_direct<T: Real>(c: &SpectralCoeffs<T>) -> Result<GridFunction<T>> {
    let lat = *c.lattice();
    let d = lat.dim();
    let idx = lat.indexer();
    let mut values = vec![Complex::new(T::zero(), T::zero()); idx.len()];
    for (xlin, xm) in idx.iter() {
        let x = lat.point(&xm);
        let mut acc = Complex::new(T::zero(), T::zero());
        for (flin, fm) in idx.iter() {
            let mut m1 = [0usize; MAX_DIM];
            for j in 0..d {
                m1[j] = fm[j] + 1;
            }
            let e = eigenfunction(&lat, &x[..d], &m1[..d])?;
            acc = acc + c.coeffs()[flin] * e;
        }
        values[xlin] = acc;
    }
    GridFunction::from_values(Domain::Finite(lat), values)
}

/// One dyadic frequency shell `N = 2^level`, with `level ∈ [ℓ_*, 0]`.
///
/// The band at the base level `ℓ_*` is the residual band collecting every
/// remaining low frequency, so that the bands tile `Ω*` exactly once.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DyadicBand {
    level: i32,
}

impl DyadicBand {
    pub fn new<T: Real>(lattice: &FiniteLattice<T>, level: i32) -> Result<Self> {
        let base = lattice.base_band_level();
        if level < base || level > 0 {
            return Err(CoreError::InvalidParameter(format!(
                "band level {level} outside [{base}, 0]"
            )));
        }
        Ok(Self { level })
    }

    pub fn level(&self) -> i32 {
        self.level
    }

    /// Dyadic value `N = 2^level`.
    pub fn value<T: Real>(&self) -> T {
        cast::<T>((2.0f64).powi(self.level))
    }
}

/// All bands from the residual base band up to `N = 1`.
pub fn band_ladder<T: Real>(lattice: &FiniteLattice<T>) -> Vec<DyadicBand> {
    (lattice.base_band_level()..=0)
        .map(|level| DyadicBand { level })
        .collect()
}

/// `max_j m_j · 2^{-level} ≤ 2H`, the inclusive upper shell boundary
/// `max ξ_j ≤ πN/h`, in exact integer arithmetic.
fn below_or_at_cut(m_max: usize, level: i32, half_steps: usize) -> bool {
    let two_h = 2 * half_steps as u128;
    if level >= 0 {
        (m_max as u128) <= (two_h << level as u32)
    } else {
        (m_max as u128) << ((-level) as u32) <= two_h
    }
}

/// Shell membership for band `N = 2^level`: `πN/(2h) < max ξ_j ≤ πN/h`.
fn in_shell(m_max: usize, level: i32, half_steps: usize) -> bool {
    below_or_at_cut(m_max, level, half_steps) && !below_or_at_cut(m_max, level - 1, half_steps)
}

/// Sharp Littlewood–Paley band projection `P_N`, `N = 2^level`.
///
/// Idempotent and self-adjoint; the base-level band keeps all remaining low
/// frequencies so `Σ_N P_N = Id` exactly.
pub fn project_band<T: Real>(f: &GridFunction<T>, band: DyadicBand) -> Result<GridFunction<T>> {
    let lat = *f.domain().as_finite()?;
    let base = lat.base_band_level();
    if band.level < base || band.level > 0 {
        return Err(CoreError::InvalidParameter(format!(
            "band level {} outside [{base}, 0]",
            band.level
        )));
    }
    let basis = SineBasis::new(lat);
    let mut coeffs = basis.forward(f)?;
    let idx = lat.indexer();
    let d = lat.dim();
    let residual = band.level == base;
    for (lin, mi) in idx.iter() {
        let m_max = (0..d).map(|j| mi[j] + 1).max().unwrap();
        let keep = if residual {
            below_or_at_cut(m_max, band.level, lat.half_steps())
        } else {
            in_shell(m_max, band.level, lat.half_steps())
        };
        if !keep {
            coeffs.coeffs_mut()[lin] = Complex::new(T::zero(), T::zero());
        }
    }
    basis.inverse(&coeffs)
}

/// Sharp low-pass projection `P_{≤N}`: keeps `max ξ_j ≤ πN/h`, `N = 2^level`.
///
/// Any cutoff level is accepted; levels ≥ 0 keep everything.
pub fn project_leq<T: Real>(f: &GridFunction<T>, level: i32) -> Result<GridFunction<T>> {
    let lat = *f.domain().as_finite()?;
    let basis = SineBasis::new(lat);
    let mut coeffs = basis.forward(f)?;
    let idx = lat.indexer();
    let d = lat.dim();
    for (lin, mi) in idx.iter() {
        let m_max = (0..d).map(|j| mi[j] + 1).max().unwrap();
        if !below_or_at_cut(m_max, level, lat.half_steps()) {
            coeffs.coeffs_mut()[lin] = Complex::new(T::zero(), T::zero());
        }
    }
    basis.inverse(&coeffs)
}

/// Fourier data on the frequency grid of a periodic truncation, in the same
/// centred row-major order as the spatial grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyField<T> {
    lattice: PeriodicLattice<T>,
    values: Vec<Complex<T>>,
}

impl<T: Real> FrequencyField<T> {
    pub fn lattice(&self) -> &PeriodicLattice<T> {
        &self.lattice
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.values
    }

    /// Riemann-sum `L²(𝕋_h^d)` norm with cell `(2π/(nh))^d`, normalized by
    /// `(2π)^{-d/2}`; equals `‖f‖_{L²(hZ^d)}` by Plancherel.
    pub fn plancherel_norm(&self) -> T {
        let n = self.lattice.points_per_axis();
        let d = self.lattice.dim();
        let h = self.lattice.spacing();
        let cell = (cast::<T>(2.0) * T::PI() / (cast_usize::<T>(n) * h)).powi(d as i32);
        let sum: T = self
            .values
            .iter()
            .map(|v| v.norm_sqr())
            .fold(T::zero(), |a, b| a + b);
        (sum * cell).sqrt() / (cast::<T>(2.0) * T::PI()).powf(cast_usize::<T>(d) / cast::<T>(2.0))
    }
}

/// Reusable centred-DFT plan for one periodic lattice.
pub struct FourierBasis<T: Real> {
    lattice: PeriodicLattice<T>,
    engine: FourierEngine<T>,
}

impl<T: Real> FourierBasis<T> {
    pub fn new(lattice: PeriodicLattice<T>) -> Self {
        let engine = FourierEngine::new(lattice.points_per_axis());
        Self { lattice, engine }
    }

    pub fn lattice(&self) -> &PeriodicLattice<T> {
        &self.lattice
    }

    /// `f̂(ξ) = h^d Σ_x e^{-ix·ξ} f(x)` on the discrete frequency grid.
    pub fn forward(&self, f: &GridFunction<T>) -> Result<FrequencyField<T>> {
        let lat = f.domain().as_periodic()?;
        if *lat != self.lattice {
            return Err(CoreError::InvalidParameter(
                "grid function lattice differs from plan lattice".into(),
            ));
        }
        let d = lat.dim();
        let mut work = f.values().to_vec();
        self.engine.apply_all_axes(&mut work, d, Direction::Forward);
        let hd = lat.spacing().powi(d as i32);
        for v in &mut work {
            *v = *v * hd;
        }
        Ok(FrequencyField {
            lattice: *lat,
            values: work,
        })
    }

    /// Inverse of [`FourierBasis::forward`].
    pub fn inverse(&self, c: &FrequencyField<T>) -> Result<GridFunction<T>> {
        if c.lattice != self.lattice {
            return Err(CoreError::InvalidParameter(
                "frequency field lattice differs from plan lattice".into(),
            ));
        }
        let d = self.lattice.dim();
        let mut work = c.values.clone();
        self.engine.apply_all_axes(&mut work, d, Direction::Inverse);
        let inv_hd = self.lattice.spacing().powi(d as i32).recip();
        for v in &mut work {
            *v = *v * inv_hd;
        }
        GridFunction::from_values(Domain::Periodic(self.lattice), work)
    }
}

/// Forward Fourier transform on a periodic truncation of `hZ^d`.
pub fn periodic_transform<T: Real>(f: &GridFunction<T>) -> Result<FrequencyField<T>> {
    let lat = f.domain().as_periodic()?;
    FourierBasis::new(*lat).forward(f)
}

/// Inverse Fourier transform on a periodic truncation of `hZ^d`.
pub fn periodic_inverse<T: Real>(c: &FrequencyField<T>) -> Result<GridFunction<T>> {
    FourierBasis::new(*c.lattice()).inverse(c)
}

/// Pointwise evaluation rule `ξ ↦ complex scalar` on the frequency box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MultiplierSymbol<T> {
    /// Identity multiplier.
    One,
    /// `P_h(ξ)`; conjugates to `-Δ_h`.
    LaplaceSymbol,
    /// `e^{-it P_h(ξ)}`; the linear Schrödinger flow.
    Propagator { t: T },
    /// Smooth dyadic annulus `ψ_N(ξ) = ψ(hξ/(πN))`, `N = 2^level`.
    SmoothShell { level: i32 },
    /// Smooth plateau `ψ̃(hξ/(πN))`, `N = 2^level`.
    SmoothLow { level: i32 },
    /// Component of `∇̃_h`: `(i/2) ∂_axis P_h(ξ) = (i/h) sin(h ξ_axis)`.
    TildeGradient { axis: usize },
    /// Sobolev weight `(1 + P_h(ξ))^{s/2}`.
    SobolevWeight { s: T },
}

impl<T: Real> MultiplierSymbol<T> {
    pub fn eval(&self, h: T, xi: &[T]) -> Complex<T> {
        let zero = T::zero();
        match *self {
            MultiplierSymbol::One => Complex::new(T::one(), zero),
            MultiplierSymbol::LaplaceSymbol => Complex::new(symbol_ph(h, xi), zero),
            MultiplierSymbol::Propagator { t } => {
                Complex::from_polar(T::one(), -t * symbol_ph(h, xi))
            }
            MultiplierSymbol::SmoothShell { level } => {
                let scale = h / (T::PI() * cast::<T>((2.0f64).powi(level)));
                let scaled: Vec<T> = xi.iter().map(|&x| x * scale).collect();
                Complex::new(cube_annulus(&scaled), zero)
            }
            MultiplierSymbol::SmoothLow { level } => {
                let scale = h / (T::PI() * cast::<T>((2.0f64).powi(level)));
                let scaled: Vec<T> = xi.iter().map(|&x| x * scale).collect();
                Complex::new(cube_plateau(&scaled), zero)
            }
            MultiplierSymbol::TildeGradient { axis } => {
                let g = symbol_ph_gradient(h, xi[axis]) / cast::<T>(2.0);
                Complex::new(zero, g)
            }
            MultiplierSymbol::SobolevWeight { s } => {
                Complex::new((T::one() + symbol_ph(h, xi)).powf(s / cast::<T>(2.0)), zero)
            }
        }
    }
}

/// Conjugate pointwise frequency multiplication by the Fourier transform.
pub fn apply_multiplier<T: Real>(
    f: &GridFunction<T>,
    symbol: &MultiplierSymbol<T>,
) -> Result<GridFunction<T>> {
    let lat = *f.domain().as_periodic()?;
    let basis = FourierBasis::new(lat);
    let mut hatf = basis.forward(f)?;
    multiply_in_frequency(&lat, hatf.values_mut(), symbol);
    basis.inverse(&hatf)
}

/// Multiply frequency data in place by a symbol (shared by the propagators).
pub(crate) fn multiply_in_frequency<T: Real>(
    lat: &PeriodicLattice<T>,
    values: &mut [Complex<T>],
    symbol: &MultiplierSymbol<T>,
) {
    let d = lat.dim();
    let h = lat.spacing();
    let n = lat.points_per_axis();
    // 1-D frequency table, reused per axis
    let freqs: Vec<T> = (0..n).map(|k| lat.frequency(k)).collect();
    let idx = lat.indexer();
    for (lin, mi) in idx.iter() {
        let mut xi = [T::zero(); MAX_DIM];
        for j in 0..d {
            xi[j] = freqs[mi[j]];
        }
        values[lin] = values[lin] * symbol.eval(h, &xi[..d]);
    }
}
