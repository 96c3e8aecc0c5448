//! Norms and estimate functionals: `L^p`, `H^s`, weighted `H^{1,1}`,
//! mass/energy, space-time Strichartz norms, admissible-pair enumeration and
//! the loss-exponent rule.
//!
//! All spatial norms carry the `h^d` weight,
//! `‖f‖_{L^p} = {h^d Σ_x |f(x)|^p}^{1/p}`, with the sup norm at `p = ∞`.

use num_complex::Complex;

use crate::calculus::{gradient_right, weight_phi};
use crate::dynamics::Trajectory;
use crate::error::{CoreError, Result};
use crate::lattice::{Domain, GridFunction};
use crate::scalar::{cast, cast_usize, Real};
use crate::spectral::{forward, periodic_transform, symbol_ph};

/// `⟨f, g⟩ = h^d Σ_x f(x) conj(g(x))`, requiring identical domains.
pub fn inner_product<T: Real>(f: &GridFunction<T>, g: &GridFunction<T>) -> Result<Complex<T>> {
    if f.domain() != g.domain() {
        return Err(CoreError::DomainMismatch {
            expected: f.domain().kind(),
            found: g.domain().kind(),
        });
    }
    let hd = f.domain().spacing().powi(f.domain().dim() as i32);
    let mut acc = Complex::new(T::zero(), T::zero());
    for (a, b) in f.values().iter().zip(g.values().iter()) {
        acc = acc + a * b.conj();
    }
    Ok(acc * hd)
}

/// `‖f‖_{L²}` with the `h^d` weight.
pub fn l2_norm<T: Real>(f: &GridFunction<T>) -> T {
    let hd = f.domain().spacing().powi(f.domain().dim() as i32);
    let sum = f
        .values()
        .iter()
        .map(|v| v.norm_sqr())
        .fold(T::zero(), |a, b| a + b);
    (sum * hd).sqrt()
}

/// `h^d`-weighted `L^p` norm; `p = ∞` gives the sup norm.
pub fn lp_norm<T: Real>(f: &GridFunction<T>, p: T) -> Result<T> {
    if p < T::one() {
        return Err(CoreError::InvalidParameter(format!(
            "p = {p} below 1"
        )));
    }
    if p.is_infinite() {
        return Ok(f.max_abs());
    }
    if p == cast::<T>(2.0) {
        return Ok(l2_norm(f));
    }
    let hd = f.domain().spacing().powi(f.domain().dim() as i32);
    let sum = f
        .values()
        .iter()
        .map(|v| v.norm().powf(p))
        .fold(T::zero(), |a, b| a + b);
    Ok((sum * hd).powf(p.recip()))
}

/// Sobolev norm `‖(1-Δ)^{s/2} f‖_{L²}` via the spectral representation:
/// eigen-coefficients on the finite lattice, Fourier symbol on the periodic
/// truncation, `|ξ|²` on the continuum grid.
pub fn hs_norm<T: Real>(f: &GridFunction<T>, s: T) -> Result<T> {
    if s.abs() > cast::<T>(2.0) {
        return Err(CoreError::InvalidParameter(format!(
            "Sobolev order {s} outside the supported range [-2, 2]"
        )));
    }
    match f.domain() {
        Domain::Finite(lat) => {
            let coeffs = forward(f)?;
            let d = lat.dim();
            let h = lat.spacing();
            let idx = lat.indexer();
            let mut acc = T::zero();
            for (lin, mi) in idx.iter() {
                let mut xi = [T::zero(); crate::lattice::MAX_DIM];
                for j in 0..d {
                    xi[j] = lat.frequency(mi[j] + 1);
                }
                let weight = (T::one() + symbol_ph(h, &xi[..d])).powf(s);
                acc = acc + weight * coeffs.coeffs()[lin].norm_sqr();
            }
            Ok(acc.sqrt())
        }
        Domain::Periodic(lat) => {
            let hatf = periodic_transform(f)?;
            let d = lat.dim();
            let h = lat.spacing();
            let n = lat.points_per_axis();
            let idx = lat.indexer();
            let freqs: Vec<T> = (0..n).map(|k| lat.frequency(k)).collect();
            let mut acc = T::zero();
            for (lin, mi) in idx.iter() {
                let mut xi = [T::zero(); crate::lattice::MAX_DIM];
                for j in 0..d {
                    xi[j] = freqs[mi[j]];
                }
                let weight = (T::one() + symbol_ph(h, &xi[..d])).powf(s);
                acc = acc + weight * hatf.values()[lin].norm_sqr();
            }
            // Plancherel cell: ‖f‖² = (nh)^{-d} Σ |f̂|²
            let cell = (cast_usize::<T>(n) * h).powi(d as i32).recip();
            Ok((acc * cell).sqrt())
        }
        Domain::Continuum(grid) => {
            let basis = crate::dst::FourierEngine::new(grid.points_per_axis());
            let d = grid.dim();
            let mut work = f.values().to_vec();
            basis.apply_all_axes(&mut work, d, crate::dst::Direction::Forward);
            let n = grid.points_per_axis();
            let idx = grid.indexer();
            let freqs: Vec<T> = (0..n).map(|k| grid.frequency(k)).collect();
            let mut acc = T::zero();
            for (lin, mi) in idx.iter() {
                let mut xi2 = T::zero();
                for j in 0..d {
                    xi2 = xi2 + freqs[mi[j]] * freqs[mi[j]];
                }
                let weight = (T::one() + xi2).powf(s);
                acc = acc + weight * work[lin].norm_sqr();
            }
            // unnormalized DFT: Σ|F|² = n^d Σ|f|², and ‖f‖² = h^d Σ|f|²
            let scale = grid.spacing().powi(d as i32) / cast_usize::<T>(n).powi(d as i32);
            Ok((acc * scale).sqrt())
        }
    }
}

/// Which spatial weight multiplies `f` in the weighted `L²` norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weight {
    /// True coordinate: `‖xf‖² = Σ_j ‖x_j f‖²` (the `hZ^d` side).
    Coordinate,
    /// Boundary-compatible weight `φ_j(x_j) = 2R sin(x_j/2R)` (the `Ω` side).
    Phi,
}

/// Weighted `L²` norm `(Σ_j ‖w_j f‖²)^{1/2}`.
pub fn weighted_l2<T: Real>(f: &GridFunction<T>, weight: Weight) -> Result<T> {
    let domain = *f.domain();
    let d = domain.dim();
    let phi_lattice = match weight {
        Weight::Phi => Some(*domain.as_finite()?),
        Weight::Coordinate => None,
    };
    let hd = domain.spacing().powi(d as i32);
    let idx = domain.indexer();
    let mut acc = T::zero();
    for (lin, mi) in idx.iter() {
        let x = domain.point(&mi);
        let mut w2 = T::zero();
        for j in 0..d {
            let wj = match &phi_lattice {
                None => x[j],
                Some(lat) => weight_phi(lat, j, x[j]),
            };
            w2 = w2 + wj * wj;
        }
        acc = acc + w2 * f.values()[lin].norm_sqr();
    }
    Ok((acc * hd).sqrt())
}

/// Weighted Sobolev norm `{‖√(1-Δ) f‖² + ‖wf‖²}^{1/2}`.
pub fn h11_norm<T: Real>(f: &GridFunction<T>, weight: Weight) -> Result<T> {
    let sobolev = hs_norm(f, T::one())?;
    let weighted = weighted_l2(f, weight)?;
    Ok((sobolev * sobolev + weighted * weighted).sqrt())
}

/// Mass `M(f) = ‖f‖²_{L²}`.
pub fn mass<T: Real>(f: &GridFunction<T>) -> T {
    let n = l2_norm(f);
    n * n
}

/// Energy `E(f) = ½‖∇f‖² + ¼‖f‖⁴_{L⁴}`. Finite and periodic domains only.
///
/// The gradient term is the right-difference field of the zero-extension,
/// summed over every edge — equal to the quadratic form `⟨-Δf, f⟩`, which
/// is what the flow conserves exactly. (On `Ω` the interior operator
/// `∇_Ω`, zero on `∂Ω`, misses the bottom boundary-edge differences; see
/// [`crate::calculus::extended_gradient_norm`].)
pub fn energy<T: Real>(f: &GridFunction<T>) -> Result<T> {
    let g = match f.domain() {
        Domain::Finite(_) => crate::calculus::extended_gradient_norm(f)?,
        Domain::Periodic(_) => gradient_right(f)?.l2_norm(),
        Domain::Continuum(_) => {
            return Err(CoreError::DomainMismatch {
                expected: "finite or periodic",
                found: "continuum",
            })
        }
    };
    let l4 = lp_norm(f, cast::<T>(4.0))?;
    Ok(g * g / cast::<T>(2.0) + l4.powi(4) / cast::<T>(4.0))
}

/// Mass fraction outside the centred sub-box whose half-side is `fraction`
/// of the full half-side (periodic/continuum monitor for spill-over).
pub fn tail_mass_fraction<T: Real>(f: &GridFunction<T>, fraction: T) -> T {
    let domain = *f.domain();
    let d = domain.dim();
    let half = match domain {
        Domain::Periodic(l) => l.side_length() / cast::<T>(2.0),
        Domain::Continuum(g) => g.half_side(),
        Domain::Finite(l) => l.half_side(),
    };
    let cut = half * fraction;
    let idx = domain.indexer();
    let mut outside = T::zero();
    let mut total = T::zero();
    for (lin, mi) in idx.iter() {
        let x = domain.point(&mi);
        let out = (0..d).any(|j| x[j].abs() > cut);
        let w = f.values()[lin].norm_sqr();
        total = total + w;
        if out {
            outside = outside + w;
        }
    }
    if total == T::zero() {
        T::zero()
    } else {
        outside / total
    }
}

/// Space-time norm `‖w‖_{L^q_t(I; L^r_x)}` by composite trapezoid over the
/// trajectory samples inside `I`; `q = ∞` takes the sup over samples.
pub fn strichartz_norm<T: Real>(
    trajectory: &Trajectory<T>,
    q: T,
    r: T,
    interval: (T, T),
) -> Result<T> {
    let (t0, t1) = interval;
    if !(t1 > t0) {
        return Err(CoreError::InvalidParameter("empty time interval".into()));
    }
    let tol = cast::<T>(1e-9) * (T::one() + t1.abs());
    let mut samples: Vec<(T, T)> = Vec::new();
    for (time, state) in trajectory.times().iter().zip(trajectory.states()) {
        if *time >= t0 - tol && *time <= t1 + tol {
            samples.push((*time, lp_norm(state, r)?));
        }
    }
    if samples.len() < 2 {
        return Err(CoreError::InvalidParameter(
            "interval covers fewer than two trajectory samples".into(),
        ));
    }
    if q.is_infinite() {
        return Ok(samples
            .iter()
            .map(|&(_, v)| v)
            .fold(T::zero(), |a, b| a.max(b)));
    }
    if q < T::one() {
        return Err(CoreError::InvalidParameter(format!("q = {q} below 1")));
    }
    let mut integral = T::zero();
    for w in samples.windows(2) {
        let (ta, va) = w[0];
        let (tb, vb) = w[1];
        integral = integral + (tb - ta) * (va.powf(q) + vb.powf(q)) / cast::<T>(2.0);
    }
    Ok(integral.powf(q.recip()))
}

/// Exact rational exponent; `den = 0, num = 1` encodes `+∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    num: i64,
    den: i64,
}

impl Ratio {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0 || num == 1, "only +∞ may have a zero denominator");
        if den == 0 {
            return Self { num: 1, den: 0 };
        }
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()) as i64;
        let sign = if den < 0 { -1 } else { 1 };
        Self {
            num: sign * num / g,
            den: (den / g).abs(),
        }
    }

    pub fn infinity() -> Self {
        Self { num: 1, den: 0 }
    }

    pub fn is_infinite(&self) -> bool {
        self.den == 0
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    /// Reciprocal; `1/∞ = 0`.
    pub fn recip(&self) -> Self {
        if self.is_infinite() {
            Self::new(0, 1)
        } else {
            assert!(self.num != 0, "reciprocal of zero");
            Self::new(self.den * self.num.signum(), self.num.abs())
        }
    }

    pub fn add(&self, other: &Ratio) -> Self {
        assert!(!self.is_infinite() && !other.is_infinite());
        Self::new(
            self.num * other.den + other.num * self.den,
            self.den * other.den,
        )
    }

    pub fn mul_int(&self, k: i64) -> Self {
        if self.is_infinite() {
            *self
        } else {
            Self::new(self.num * k, self.den)
        }
    }

    pub fn to_float<T: Real>(&self) -> T {
        if self.is_infinite() {
            T::infinity()
        } else {
            cast::<T>(self.num as f64) / cast::<T>(self.den as f64)
        }
    }
}

impl std::fmt::Display for Ratio {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_infinite() {
            write!(f, "inf")
        } else if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

/// Exponent pair `(q, r)` on the lattice-admissible line
/// `3/q + d/r = d/2`, excluding `(2, ∞)` in three dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdmissiblePair {
    q: Ratio,
    r: Ratio,
}

impl AdmissiblePair {
    pub fn new(q: Ratio, r: Ratio, d: usize) -> Result<Self> {
        if d != 2 && d != 3 {
            return Err(CoreError::InvalidParameter(
                "admissible pairs are defined for d in {2, 3}".into(),
            ));
        }
        let two = Ratio::new(2, 1);
        let ge2 = |x: &Ratio| x.is_infinite() || x.num * two.den >= two.num * x.den;
        if !ge2(&q) || !ge2(&r) {
            return Err(CoreError::InvalidParameter(format!(
                "exponents must lie in [2, ∞]: ({q}, {r})"
            )));
        }
        if d == 3 && q == two && r.is_infinite() {
            return Err(CoreError::InvalidParameter(
                "(q, r, d) = (2, ∞, 3) is excluded".into(),
            ));
        }
        // 3/q + d/r = d/2 exactly
        let lhs = q.recip().mul_int(3).add(&r.recip().mul_int(d as i64));
        let rhs = Ratio::new(d as i64, 2);
        if lhs != rhs {
            return Err(CoreError::InvalidParameter(format!(
                "({q}, {r}) is not on the admissible line for d = {d}"
            )));
        }
        Ok(Self { q, r })
    }

    pub fn q(&self) -> Ratio {
        self.q
    }

    pub fn r(&self) -> Ratio {
        self.r
    }
}

/// Enumerate `count` rational pairs on the admissible line (endpoints
/// included where admissible). For `d = 3` the excluded endpoint `(2, ∞)`
/// is approached but never produced.
pub fn admissible_pairs(d: usize, count: usize) -> Result<Vec<AdmissiblePair>> {
    if d != 2 && d != 3 {
        return Err(CoreError::InvalidParameter(
            "admissible pairs are defined for d in {2, 3}".into(),
        ));
    }
    if count < 2 {
        return Err(CoreError::InvalidParameter(
            "need at least two pairs".into(),
        ));
    }
    let mut pairs = Vec::with_capacity(count);
    for k in 0..count {
        // θ = 1/q walks from 0 toward the line's endpoint
        let (theta, inv_r) = match d {
            2 => {
                // θ ∈ [0, 1/3], 1/r = (1 - 3θ)/2
                let theta = Ratio::new(k as i64, 3 * (count as i64 - 1));
                let inv_r = Ratio::new(1, 2).add(&theta.mul_int(-3).mul_int(1).div2());
                (theta, inv_r)
            }
            _ => {
                // θ ∈ [0, 1/2), 1/r = 1/2 - θ
                let theta = Ratio::new(k as i64, 2 * count as i64);
                let inv_r = Ratio::new(1, 2).add(&theta.mul_int(-1));
                (theta, inv_r)
            }
        };
        let q = theta.recip_or_infinity();
        let r = inv_r.recip_or_infinity();
        pairs.push(AdmissiblePair::new(q, r, d)?);
    }
    Ok(pairs)
}

impl Ratio {
    fn div2(&self) -> Self {
        Self::new(self.num, self.den * 2)
    }

    fn recip_or_infinity(&self) -> Self {
        if self.num == 0 {
            Self::infinity()
        } else {
            self.recip()
        }
    }
}

/// Regularity loss from the three-branch rule:
/// `s = 1/q + ε` if `α ≥ 1`; `s = (2-α)/q` if `0 < α < 1`; `s = 2/q + ε`
/// if `α = 0`. `ε > 0` is required on the strict branches.
pub fn loss_exponent<T: Real>(q: T, alpha: T, eps: T) -> Result<T> {
    if !(alpha >= T::zero()) {
        return Err(CoreError::InvalidParameter(
            "alpha must be nonnegative".into(),
        ));
    }
    let inv_q = if q.is_infinite() { T::zero() } else { q.recip() };
    if alpha >= T::one() || alpha == T::zero() {
        if !(eps > T::zero()) {
            return Err(CoreError::InvalidParameter(
                "strict branches need eps > 0".into(),
            ));
        }
        if alpha >= T::one() {
            Ok(inv_q + eps)
        } else {
            Ok(cast::<T>(2.0) * inv_q + eps)
        }
    } else {
        Ok((cast::<T>(2.0) - alpha) * inv_q)
    }
}
