//! Lattice geometry, grid-function storage and index maps.
//!
//! Three kinds of domain are supported:
//!
//! * [`FiniteLattice`] — a cube of spacing-`h` points with zero boundary.
//!   Only interior values are stored; every operator treats the boundary as
//!   an implicit zero. The standard construction is [`LatticeSpec`] with
//!   `h = π/K` and half-side `πR`; the unit-spacing lattice used by the
//!   small-amplitude rescaling is the same type with `spacing = 1`.
//! * [`PeriodicLattice`] — a periodic truncation of the infinite lattice
//!   `hZ^d`, coordinates centred at the origin.
//! * [`ContinuumGrid`] — a fine periodic reference grid standing in for
//!   `R^d` in quadrature and pseudospectral reference solves.
//!
//! Interior ordering is row-major with axis 0 slowest and axis `d-1`
//! contiguous: `lin = (i_0 * n + i_1) * n + i_2`. Every transform in this
//! crate depends on that ordering.

use num_complex::Complex;

use crate::error::{CoreError, Result};
use crate::scalar::{cast, cast_usize, Real};

/// Maximum supported dimension.
pub const MAX_DIM: usize = 3;

/// Geometry of the finite cube `Ω_{h,πR}`: `h = π/K`, half-side `πR`.
///
/// `alpha` records the targeted expansion relation `R ≈ h^{-α}`; it is
/// experiment bookkeeping only and never enters the geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSpec {
    d: usize,
    k: u32,
    r: u32,
    alpha: f64,
}

impl LatticeSpec {
    /// Build a spec, validating `d ∈ {1,2,3}`, `K ≥ 1`, `R ≥ 1`, `α ≥ 0`.
    pub fn new(d: usize, k: u32, r: u32, alpha: f64) -> Result<Self> {
        if d == 0 || d > MAX_DIM {
            return Err(CoreError::InvalidLattice(format!(
                "dimension {d} not in 1..=3"
            )));
        }
        if k == 0 || r == 0 {
            return Err(CoreError::InvalidLattice(format!(
                "K and R must be positive, got K={k}, R={r}"
            )));
        }
        if !(alpha >= 0.0) {
            return Err(CoreError::InvalidLattice(format!(
                "alpha must be nonnegative, got {alpha}"
            )));
        }
        Ok(Self { d, k, r, alpha })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Grid size `h = π/K`, never stored independently.
    pub fn h<T: Real>(&self) -> T {
        T::PI() / cast_usize::<T>(self.k as usize)
    }

    /// Points per axis including the boundary: `2KR + 1`.
    pub fn total_per_axis(&self) -> usize {
        2 * (self.k as usize) * (self.r as usize) + 1
    }

    /// Interior points per axis: `2KR - 1`.
    pub fn interior_per_axis(&self) -> usize {
        2 * (self.k as usize) * (self.r as usize) - 1
    }

    /// Total interior cardinality `(2KR-1)^d`; equals the cardinality of `Ω*`.
    pub fn interior_len(&self) -> usize {
        self.interior_per_axis().pow(self.d as u32)
    }

    /// Cardinality of the frequency set `Ω*` (the basis is square).
    pub fn frequency_len(&self) -> usize {
        self.interior_len()
    }

    /// The storage geometry backing this spec.
    pub fn lattice<T: Real>(&self) -> FiniteLattice<T> {
        FiniteLattice::new(self.d, self.h::<T>(), (self.k * self.r) as usize)
            .expect("spec already validated")
    }
}

/// Deterministic rule realizing `R ~ h^{-α}`: `R = max(1, round(c (K/π)^α))`.
pub fn choose_r_for_alpha(k: u32, alpha: f64, c: f64) -> Result<u32> {
    if k == 0 {
        return Err(CoreError::InvalidParameter("K must be positive".into()));
    }
    if !(alpha >= 0.0) {
        return Err(CoreError::InvalidParameter(
            "alpha must be nonnegative".into(),
        ));
    }
    if !(c > 0.0) {
        return Err(CoreError::InvalidParameter(
            "proportionality constant must be positive".into(),
        ));
    }
    let raw = c * (k as f64 / std::f64::consts::PI).powf(alpha);
    Ok((raw.round() as i64).max(1) as u32)
}

/// A finite cube of lattice points with zero boundary, general spacing.
///
/// Boundary sits at `±spacing·half_steps`; interior points per axis are
/// `2·half_steps - 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteLattice<T> {
    d: usize,
    spacing: T,
    half_steps: usize,
}

impl<T: Real> FiniteLattice<T> {
    pub fn new(d: usize, spacing: T, half_steps: usize) -> Result<Self> {
        if d == 0 || d > MAX_DIM {
            return Err(CoreError::InvalidLattice(format!(
                "dimension {d} not in 1..=3"
            )));
        }
        if half_steps == 0 {
            return Err(CoreError::InvalidLattice(
                "half_steps must be positive".into(),
            ));
        }
        if !(spacing > T::zero()) {
            return Err(CoreError::InvalidLattice("spacing must be positive".into()));
        }
        Ok(Self {
            d,
            spacing,
            half_steps,
        })
    }

    /// Unit-spacing lattice `Ω̃` with the same step count (the
    /// small-amplitude side of the rescaling bridge).
    pub fn unit_spacing(d: usize, half_steps: usize) -> Result<Self> {
        Self::new(d, T::one(), half_steps)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn spacing(&self) -> T {
        self.spacing
    }

    pub fn half_steps(&self) -> usize {
        self.half_steps
    }

    /// Half-side of the cube (`πR` for a spec-backed lattice).
    pub fn half_side(&self) -> T {
        self.spacing * cast_usize::<T>(self.half_steps)
    }

    pub fn interior_per_axis(&self) -> usize {
        2 * self.half_steps - 1
    }

    pub fn interior_len(&self) -> usize {
        self.interior_per_axis().pow(self.d as u32)
    }

    pub fn indexer(&self) -> Indexer {
        Indexer::new(self.d, self.interior_per_axis())
    }

    /// Coordinate of interior index `i` along one axis: `(i+1)h - L`.
    pub fn coord(&self, i: usize) -> T {
        cast_usize::<T>(i + 1) * self.spacing - self.half_side()
    }

    /// Coordinates of an interior multi-index.
    pub fn point(&self, multi: &[usize; MAX_DIM]) -> [T; MAX_DIM] {
        let mut x = [T::zero(); MAX_DIM];
        for j in 0..self.d {
            x[j] = self.coord(multi[j]);
        }
        x
    }

    /// Frequency component for 1-based frequency integer `m`: `ξ = mπ/(2L)`.
    ///
    /// For a spec-backed lattice this is `m/(2R)`.
    pub fn frequency(&self, m: usize) -> T {
        cast_usize::<T>(m) * T::PI() / (cast::<T>(2.0) * self.half_side())
    }

    /// Frequency multi-index (1-based per axis) for a row-major linear index.
    pub fn frequency_multi(&self, lin: usize) -> [usize; MAX_DIM] {
        let mut m = self.indexer().multi(lin);
        for j in 0..self.d {
            m[j] += 1;
        }
        m
    }

    /// All `ξ_j` components for a frequency multi-index.
    pub fn frequency_point(&self, m: &[usize; MAX_DIM]) -> [T; MAX_DIM] {
        let mut xi = [T::zero(); MAX_DIM];
        for j in 0..self.d {
            xi[j] = self.frequency(m[j]);
        }
        xi
    }

    /// Smallest dyadic level `ℓ_*` with `N_* = 2^{ℓ_*} = 2^{⌈log2(h/π)⌉ - 1}`.
    pub fn base_band_level(&self) -> i32 {
        let ratio = self.spacing.to_f64().expect("finite spacing") / std::f64::consts::PI;
        (ratio.log2().ceil() as i32) - 1
    }
}

/// Periodic truncation of `hZ^d`: side `points_per_axis · spacing`,
/// coordinates centred (`x = spacing·(i - n/2)`). Point count per axis must
/// be even so the frequency grid covers `[-π/h, π/h)` symmetrically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicLattice<T> {
    d: usize,
    spacing: T,
    points_per_axis: usize,
}

impl<T: Real> PeriodicLattice<T> {
    pub fn new(d: usize, spacing: T, points_per_axis: usize) -> Result<Self> {
        if d == 0 || d > MAX_DIM {
            return Err(CoreError::InvalidLattice(format!(
                "dimension {d} not in 1..=3"
            )));
        }
        if points_per_axis < 2 || !points_per_axis.is_multiple_of(2) {
            return Err(CoreError::InvalidLattice(format!(
                "points per axis must be even and >= 2, got {points_per_axis}"
            )));
        }
        if !(spacing > T::zero()) {
            return Err(CoreError::InvalidLattice("spacing must be positive".into()));
        }
        Ok(Self {
            d,
            spacing,
            points_per_axis,
        })
    }

    /// Box that contains the finite lattice `Ω` with `factor` times its side.
    ///
    /// Side length is `factor · 2L` rounded up to an even number of steps.
    pub fn containing(lattice: &FiniteLattice<T>, factor: usize) -> Result<Self> {
        let steps = 2 * lattice.half_steps() * factor.max(1);
        Self::new(lattice.dim(), lattice.spacing(), steps)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn spacing(&self) -> T {
        self.spacing
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn len(&self) -> usize {
        self.points_per_axis.pow(self.d as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn side_length(&self) -> T {
        self.spacing * cast_usize::<T>(self.points_per_axis)
    }

    pub fn indexer(&self) -> Indexer {
        Indexer::new(self.d, self.points_per_axis)
    }

    /// Centred coordinate of storage index `i`: `spacing·(i - n/2)`.
    pub fn coord(&self, i: usize) -> T {
        let c = self.points_per_axis / 2;
        let offset = i as isize - c as isize;
        cast::<T>(offset as f64) * self.spacing
    }

    pub fn point(&self, multi: &[usize; MAX_DIM]) -> [T; MAX_DIM] {
        let mut x = [T::zero(); MAX_DIM];
        for j in 0..self.d {
            x[j] = self.coord(multi[j]);
        }
        x
    }

    /// Frequency of storage index `k`: `ξ = 2π(k - n/2)/(n·h)`, covering
    /// the periodic box `𝕋_h^d = (2π/h)[-1/2, 1/2)^d`.
    pub fn frequency(&self, k: usize) -> T {
        let c = self.points_per_axis / 2;
        let offset = k as isize - c as isize;
        cast::<T>(offset as f64) * cast::<T>(2.0) * T::PI()
            / (cast_usize::<T>(self.points_per_axis) * self.spacing)
    }
}

/// Fine periodic reference grid standing in for `R^d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuumGrid<T> {
    d: usize,
    spacing: T,
    points_per_axis: usize,
}

impl<T: Real> ContinuumGrid<T> {
    pub fn new(d: usize, spacing: T, points_per_axis: usize) -> Result<Self> {
        if d == 0 || d > MAX_DIM {
            return Err(CoreError::InvalidLattice(format!(
                "dimension {d} not in 1..=3"
            )));
        }
        if points_per_axis < 2 || !points_per_axis.is_multiple_of(2) {
            return Err(CoreError::InvalidLattice(format!(
                "points per axis must be even and >= 2, got {points_per_axis}"
            )));
        }
        if !(spacing > T::zero()) {
            return Err(CoreError::InvalidLattice("spacing must be positive".into()));
        }
        Ok(Self {
            d,
            spacing,
            points_per_axis,
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn spacing(&self) -> T {
        self.spacing
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn len(&self) -> usize {
        self.points_per_axis.pow(self.d as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn half_side(&self) -> T {
        self.spacing * cast_usize::<T>(self.points_per_axis) / cast(2.0)
    }

    pub fn indexer(&self) -> Indexer {
        Indexer::new(self.d, self.points_per_axis)
    }

    pub fn coord(&self, i: usize) -> T {
        let c = self.points_per_axis / 2;
        let offset = i as isize - c as isize;
        cast::<T>(offset as f64) * self.spacing
    }

    pub fn point(&self, multi: &[usize; MAX_DIM]) -> [T; MAX_DIM] {
        let mut x = [T::zero(); MAX_DIM];
        for j in 0..self.d {
            x[j] = self.coord(multi[j]);
        }
        x
    }

    pub fn frequency(&self, k: usize) -> T {
        let c = self.points_per_axis / 2;
        let offset = k as isize - c as isize;
        cast::<T>(offset as f64) * cast::<T>(2.0) * T::PI()
            / (cast_usize::<T>(self.points_per_axis) * self.spacing)
    }
}

/// The three storage domains a grid function can live on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain<T> {
    Finite(FiniteLattice<T>),
    Periodic(PeriodicLattice<T>),
    Continuum(ContinuumGrid<T>),
}

impl<T: Real> Domain<T> {
    pub fn dim(&self) -> usize {
        match self {
            Domain::Finite(l) => l.dim(),
            Domain::Periodic(l) => l.dim(),
            Domain::Continuum(g) => g.dim(),
        }
    }

    pub fn spacing(&self) -> T {
        match self {
            Domain::Finite(l) => l.spacing(),
            Domain::Periodic(l) => l.spacing(),
            Domain::Continuum(g) => g.spacing(),
        }
    }

    pub fn points_per_axis(&self) -> usize {
        match self {
            Domain::Finite(l) => l.interior_per_axis(),
            Domain::Periodic(l) => l.points_per_axis(),
            Domain::Continuum(g) => g.points_per_axis(),
        }
    }

    pub fn len(&self) -> usize {
        self.points_per_axis().pow(self.dim() as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn indexer(&self) -> Indexer {
        Indexer::new(self.dim(), self.points_per_axis())
    }

    pub fn point(&self, multi: &[usize; MAX_DIM]) -> [T; MAX_DIM] {
        match self {
            Domain::Finite(l) => l.point(multi),
            Domain::Periodic(l) => l.point(multi),
            Domain::Continuum(g) => g.point(multi),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Domain::Finite(_) => "finite",
            Domain::Periodic(_) => "periodic",
            Domain::Continuum(_) => "continuum",
        }
    }

    pub fn as_finite(&self) -> Result<&FiniteLattice<T>> {
        match self {
            Domain::Finite(l) => Ok(l),
            other => Err(CoreError::DomainMismatch {
                expected: "finite",
                found: other.kind(),
            }),
        }
    }

    pub fn as_periodic(&self) -> Result<&PeriodicLattice<T>> {
        match self {
            Domain::Periodic(l) => Ok(l),
            other => Err(CoreError::DomainMismatch {
                expected: "periodic",
                found: other.kind(),
            }),
        }
    }

    pub fn as_continuum(&self) -> Result<&ContinuumGrid<T>> {
        match self {
            Domain::Continuum(g) => Ok(g),
            other => Err(CoreError::DomainMismatch {
                expected: "continuum",
                found: other.kind(),
            }),
        }
    }
}

/// One frequency of `Ω*`: an integer multi-index with `1 ≤ m_j ≤ 2H-1`,
/// carrying `ξ_j = m_j π / (2L)` (`= m_j/(2R)` on a spec-backed lattice),
/// so that `0 < ξ_j < π/h` on every axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrequencyIndex {
    d: usize,
    m: [usize; MAX_DIM],
}

impl FrequencyIndex {
    pub fn new<T: Real>(lattice: &FiniteLattice<T>, m: &[usize]) -> Result<Self> {
        let d = lattice.dim();
        if m.len() != d {
            return Err(CoreError::InvalidParameter(
                "frequency arity mismatch".into(),
            ));
        }
        let boundary = 2 * lattice.half_steps();
        let mut stored = [0usize; MAX_DIM];
        for (j, &mj) in m.iter().enumerate() {
            if mj == 0 || mj >= boundary {
                return Err(CoreError::InvalidParameter(format!(
                    "frequency integer {mj} outside the open range (0, {boundary})"
                )));
            }
            stored[j] = mj;
        }
        Ok(Self { d, m: stored })
    }

    pub fn from_linear<T: Real>(lattice: &FiniteLattice<T>, lin: usize) -> Self {
        let mut m = lattice.indexer().multi(lin);
        for j in 0..lattice.dim() {
            m[j] += 1;
        }
        Self {
            d: lattice.dim(),
            m,
        }
    }

    pub fn integers(&self) -> &[usize] {
        &self.m[..self.d]
    }

    pub fn xi<T: Real>(&self, lattice: &FiniteLattice<T>) -> [T; MAX_DIM] {
        lattice.frequency_point(&self.m)
    }
}

/// Row-major index arithmetic for a cube of side `n` in `d` axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Indexer {
    d: usize,
    n: usize,
}

impl Indexer {
    pub fn new(d: usize, n: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&d));
        Self { d, n }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn per_axis(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Stride of axis `a` (axis 0 slowest, last axis contiguous).
    pub fn stride(&self, axis: usize) -> usize {
        self.n.pow((self.d - 1 - axis) as u32)
    }

    #[inline]
    pub fn lin(&self, multi: &[usize; MAX_DIM]) -> usize {
        let mut lin = 0;
        for j in 0..self.d {
            debug_assert!(multi[j] < self.n);
            lin = lin * self.n + multi[j];
        }
        lin
    }

    #[inline]
    pub fn multi(&self, mut lin: usize) -> [usize; MAX_DIM] {
        let mut m = [0usize; MAX_DIM];
        for j in (0..self.d).rev() {
            m[j] = lin % self.n;
            lin /= self.n;
        }
        debug_assert_eq!(lin, 0);
        m
    }

    /// Iterate all multi-indices in row-major order.
    pub fn iter(&self) -> MultiIndexIter {
        MultiIndexIter {
            indexer: *self,
            next: 0,
        }
    }
}

/// Allocation-free row-major multi-index iterator.
pub struct MultiIndexIter {
    indexer: Indexer,
    next: usize,
}

impl Iterator for MultiIndexIter {
    type Item = (usize, [usize; MAX_DIM]);

    fn next(&mut self) -> Option<Self::Item> {
        if self.next >= self.indexer.len() {
            return None;
        }
        let lin = self.next;
        self.next += 1;
        Some((lin, self.indexer.multi(lin)))
    }
}

/// Complex-valued field over one of the three domains.
///
/// On a finite lattice only interior values are stored; the boundary is an
/// implicit zero everywhere.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction<T> {
    domain: Domain<T>,
    values: Vec<Complex<T>>,
}

impl<T: Real> GridFunction<T> {
    pub fn zeros(domain: Domain<T>) -> Self {
        let len = domain.len();
        Self {
            domain,
            values: vec![Complex::new(T::zero(), T::zero()); len],
        }
    }

    pub fn from_values(domain: Domain<T>, values: Vec<Complex<T>>) -> Result<Self> {
        if values.len() != domain.len() {
            return Err(CoreError::ShapeMismatch {
                expected: domain.len(),
                found: values.len(),
            });
        }
        Ok(Self { domain, values })
    }

    /// Sample a function of the coordinates pointwise.
    pub fn from_fn(domain: Domain<T>, mut f: impl FnMut(&[T]) -> Complex<T>) -> Self {
        let idx = domain.indexer();
        let d = domain.dim();
        let mut values = Vec::with_capacity(idx.len());
        for (_, m) in idx.iter() {
            let x = domain.point(&m);
            values.push(f(&x[..d]));
        }
        Self { domain, values }
    }

    pub fn domain(&self) -> &Domain<T> {
        &self.domain
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex<T>> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self {
            domain: self.domain,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// `self + c * other`, requiring identical domains.
    pub fn axpy(&self, c: Complex<T>, other: &Self) -> Result<Self> {
        if self.domain != other.domain {
            return Err(CoreError::DomainMismatch {
                expected: self.domain.kind(),
                found: other.domain.kind(),
            });
        }
        let values = self
            .values
            .iter()
            .zip(other.values.iter())
            .map(|(&a, &b)| a + c * b)
            .collect();
        Ok(Self {
            domain: self.domain,
            values,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.axpy(Complex::new(-T::one(), T::zero()), other)
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        self.map(|v| c * v)
    }

    /// Pointwise multiply by a real field given on the same index set.
    pub fn mul_real(&self, weights: &[T]) -> Result<Self> {
        if weights.len() != self.values.len() {
            return Err(CoreError::ShapeMismatch {
                expected: self.values.len(),
                found: weights.len(),
            });
        }
        let values = self
            .values
            .iter()
            .zip(weights.iter())
            .map(|(&v, &w)| v * w)
            .collect();
        Ok(Self {
            domain: self.domain,
            values,
        })
    }

    pub fn max_abs(&self) -> T {
        self.values
            .iter()
            .map(|v| v.norm())
            .fold(T::zero(), |a, b| a.max(b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_lattice_counts() {
        // d=1, K=1, R=1: points {-π, 0, π}, one interior point
        let spec = LatticeSpec::new(1, 1, 1, 0.0).unwrap();
        assert_eq!(spec.total_per_axis(), 3);
        assert_eq!(spec.interior_per_axis(), 1);
        assert_eq!(spec.interior_len(), 1);
        assert_eq!(spec.frequency_len(), 1);
        let lat = spec.lattice::<f64>();
        assert!((lat.coord(0) - 0.0).abs() < 1e-15);
        assert!((lat.half_side() - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn two_d_counts() {
        // d=2, K=2, R=1: 25 total, 9 interior
        let spec = LatticeSpec::new(2, 2, 1, 0.0).unwrap();
        assert_eq!(spec.total_per_axis() * spec.total_per_axis(), 25);
        assert_eq!(spec.interior_len(), 9);
    }

    #[test]
    fn one_d_k4_r2() {
        // d=1, K=4, R=2: h = π/4, side length 4π, 15 interior points
        let spec = LatticeSpec::new(1, 4, 2, 0.0).unwrap();
        assert!((spec.h::<f64>() - std::f64::consts::PI / 4.0).abs() < 1e-15);
        assert_eq!(spec.interior_per_axis(), 15);
        let lat = spec.lattice::<f64>();
        assert!((lat.half_side() - 2.0 * std::f64::consts::PI).abs() < 1e-14);
    }

    #[test]
    fn spec_rejects_bad_input() {
        assert!(LatticeSpec::new(0, 1, 1, 0.0).is_err());
        assert!(LatticeSpec::new(4, 1, 1, 0.0).is_err());
        assert!(LatticeSpec::new(2, 0, 1, 0.0).is_err());
        assert!(LatticeSpec::new(2, 1, 0, 0.0).is_err());
        assert!(LatticeSpec::new(2, 1, 1, -0.5).is_err());
    }

    #[test]
    fn choose_r_examples() {
        assert_eq!(choose_r_for_alpha(8, 0.0, 1.0).unwrap(), 1);
        assert_eq!(choose_r_for_alpha(16, 1.0, 1.0).unwrap(), 5);
        assert_eq!(choose_r_for_alpha(16, 0.5, 1.0).unwrap(), 2);
    }

    #[test]
    fn choose_r_monotone_in_k() {
        for &alpha in &[0.0, 0.25, 0.5, 1.0, 1.5] {
            let mut prev = 0;
            for k in 1..=64 {
                let r = choose_r_for_alpha(k, alpha, 1.0).unwrap();
                assert!(r >= prev, "alpha={alpha} k={k}: {r} < {prev}");
                prev = r;
            }
        }
    }

    #[test]
    fn frequency_matches_m_over_2r() {
        let spec = LatticeSpec::new(1, 4, 2, 0.0).unwrap();
        let lat = spec.lattice::<f64>();
        for m in 1..=spec.interior_per_axis() {
            let xi = lat.frequency(m);
            assert!((xi - m as f64 / (2.0 * spec.r() as f64)).abs() < 1e-14);
        }
        // 0 < ξ < π/h for all interior m
        let top = lat.frequency(spec.interior_per_axis());
        assert!(top > 0.0 && top < spec.k() as f64);
    }

    #[test]
    fn frequency_index_validation_and_round_trip() {
        let spec = LatticeSpec::new(2, 2, 2, 0.0).unwrap();
        let lat = spec.lattice::<f64>();
        assert!(FrequencyIndex::new(&lat, &[0, 1]).is_err());
        assert!(FrequencyIndex::new(&lat, &[1, 8]).is_err());
        assert!(FrequencyIndex::new(&lat, &[1]).is_err());
        let fi = FrequencyIndex::new(&lat, &[3, 5]).unwrap();
        let xi = fi.xi(&lat);
        // ξ = m/(2R) with R = 2, strictly inside (0, π/h)
        assert!((xi[0] - 0.75).abs() < 1e-15);
        assert!((xi[1] - 1.25).abs() < 1e-15);
        for lin in 0..spec.frequency_len() {
            let fi = FrequencyIndex::from_linear(&lat, lin);
            for (j, &m) in fi.integers().iter().enumerate() {
                let x: f64 = lat.frequency(m);
                assert!(x > 0.0 && x < spec.k() as f64, "axis {j}");
            }
        }
    }

    #[test]
    fn index_round_trip_small() {
        for d in 1..=3usize {
            let idx = Indexer::new(d, 7);
            for lin in 0..idx.len() {
                let m = idx.multi(lin);
                assert_eq!(idx.lin(&m), lin);
            }
        }
    }

    #[test]
    fn periodic_coords_centered() {
        let lat = PeriodicLattice::new(1, 0.5f64, 8).unwrap();
        assert!((lat.coord(0) + 2.0).abs() < 1e-15);
        assert!((lat.coord(4) - 0.0).abs() < 1e-15);
        assert!((lat.coord(7) - 1.5).abs() < 1e-15);
        // frequencies cover [-π/h, π/h)
        assert!((lat.frequency(0) + std::f64::consts::PI / 0.5).abs() < 1e-12);
        assert!((lat.frequency(4) - 0.0).abs() < 1e-15);
    }

    #[test]
    fn periodic_rejects_odd() {
        assert!(PeriodicLattice::new(1, 0.5f64, 7).is_err());
    }

    #[test]
    fn domain_types_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<LatticeSpec>();
        assert_send_sync::<FiniteLattice<f64>>();
        assert_send_sync::<PeriodicLattice<f64>>();
        assert_send_sync::<ContinuumGrid<f64>>();
        assert_send_sync::<GridFunction<f64>>();
        assert_send_sync::<FrequencyIndex>();
    }

    #[test]
    fn base_band_level_examples() {
        let lat = LatticeSpec::new(1, 4, 1, 0.0).unwrap().lattice::<f64>();
        // h/π = 1/4, log2 = -2, ceil = -2, level = -3
        assert_eq!(lat.base_band_level(), -3);
        let lat1 = LatticeSpec::new(1, 1, 1, 0.0).unwrap().lattice::<f64>();
        assert_eq!(lat1.base_band_level(), -1);
        let lat3 = LatticeSpec::new(1, 3, 1, 0.0).unwrap().lattice::<f64>();
        // log2(1/3) = -1.585, ceil = -1, level = -2
        assert_eq!(lat3.base_band_level(), -2);
    }
}
