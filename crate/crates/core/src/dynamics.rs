//! Linear propagators on all three domains, the explicit propagator kernel,
//! and the split-step cubic NLS integrator.
//!
//! The linear flow is exact in the respective spectral basis: diagonal phase
//! `e^{-itP_h(ξ)}` on either lattice, `e^{-it|ξ|²}` on the continuum grid.
//! The nonlinear substep `i∂_t w = ±|w|²w` is solved exactly by a pointwise
//! phase rotation, so Strang splitting conserves mass to roundoff and its
//! only error is the `O(τ²)` splitting commutator.

use num_complex::Complex;

use crate::dst::{Direction, FourierEngine, SineEngine};
use crate::error::{CoreError, Result};
use crate::lattice::{Domain, FiniteLattice, GridFunction, MAX_DIM};
use crate::scalar::{cast, cast_usize, Real};
use crate::spectral::symbol_ph;

/// Diagonal propagator plan for a fixed time step on a fixed domain.
///
/// Holds the transform plan and the unit-modulus phase table
/// (`|phase| = 1` for every frequency).
pub struct PropagatorPlan<T: Real> {
    domain: Domain<T>,
    t: T,
    phases: Vec<Complex<T>>,
    engine: PlanEngine<T>,
}

enum PlanEngine<T: Real> {
    Sine(SineEngine<T>),
    Fourier(FourierEngine<T>),
}

impl<T: Real> PropagatorPlan<T> {
    pub fn new(domain: Domain<T>, t: T) -> Self {
        let d = domain.dim();
        let idx = domain.indexer();
        let mut phases = Vec::with_capacity(idx.len());
        match &domain {
            Domain::Finite(lat) => {
                let h = lat.spacing();
                for (_, mi) in idx.iter() {
                    let mut xi = [T::zero(); MAX_DIM];
                    for j in 0..d {
                        xi[j] = lat.frequency(mi[j] + 1);
                    }
                    phases.push(Complex::from_polar(T::one(), -t * symbol_ph(h, &xi[..d])));
                }
            }
            Domain::Periodic(lat) => {
                let h = lat.spacing();
                let freqs: Vec<T> = (0..lat.points_per_axis()).map(|k| lat.frequency(k)).collect();
                for (_, mi) in idx.iter() {
                    let mut xi = [T::zero(); MAX_DIM];
                    for j in 0..d {
                        xi[j] = freqs[mi[j]];
                    }
                    phases.push(Complex::from_polar(T::one(), -t * symbol_ph(h, &xi[..d])));
                }
            }
            Domain::Continuum(grid) => {
                let freqs: Vec<T> = (0..grid.points_per_axis())
                    .map(|k| grid.frequency(k))
                    .collect();
                for (_, mi) in idx.iter() {
                    let mut xi2 = T::zero();
                    for j in 0..d {
                        xi2 = xi2 + freqs[mi[j]] * freqs[mi[j]];
                    }
                    phases.push(Complex::from_polar(T::one(), -t * xi2));
                }
            }
        }
        let engine = match &domain {
            Domain::Finite(lat) => PlanEngine::Sine(SineEngine::new(lat.half_steps())),
            Domain::Periodic(lat) => PlanEngine::Fourier(FourierEngine::new(lat.points_per_axis())),
            Domain::Continuum(grid) => {
                PlanEngine::Fourier(FourierEngine::new(grid.points_per_axis()))
            }
        };
        Self {
            domain,
            t,
            phases,
            engine,
        }
    }

    pub fn time(&self) -> T {
        self.t
    }

    pub fn phases(&self) -> &[Complex<T>] {
        &self.phases
    }

    /// Transform, multiply by the phase table, transform back.
    pub fn apply(&self, f: &GridFunction<T>) -> Result<GridFunction<T>> {
        if *f.domain() != self.domain {
            return Err(CoreError::DomainMismatch {
                expected: self.domain.kind(),
                found: f.domain().kind(),
            });
        }
        let mut work = f.values().to_vec();
        self.apply_in_place(&mut work);
        GridFunction::from_values(self.domain, work)
    }

    fn apply_in_place(&self, work: &mut [Complex<T>]) {
        let d = self.domain.dim();
        match &self.engine {
            PlanEngine::Sine(engine) => {
                engine.apply_all_axes(work, d);
                for (v, p) in work.iter_mut().zip(self.phases.iter()) {
                    *v = *v * p;
                }
                engine.apply_all_axes(work, d);
                // DST-I applied twice is (M/2)^d times the identity
                let m_total = 2 * self.domain.as_finite().expect("finite plan").half_steps();
                let scale = (cast::<T>(2.0) / cast_usize::<T>(m_total)).powi(d as i32);
                for v in work.iter_mut() {
                    *v = *v * scale;
                }
            }
            PlanEngine::Fourier(engine) => {
                engine.apply_all_axes(work, d, Direction::Forward);
                for (v, p) in work.iter_mut().zip(self.phases.iter()) {
                    *v = *v * p;
                }
                engine.apply_all_axes(work, d, Direction::Inverse);
            }
        }
    }
}

/// Exact linear Schrödinger flow `e^{itΔ} f` on the function's own domain.
pub fn linear_flow<T: Real>(f: &GridFunction<T>, t: T) -> Result<GridFunction<T>> {
    PropagatorPlan::new(*f.domain(), t).apply(f)
}

/// Frequency cutoff `max_j ξ_j ≤ πN/h`, `N = 2^level`, as a bound on the
/// 1-based frequency integer: `m ≤ 2H·2^level`.
fn kernel_cutoff(half_steps: usize, level: i32) -> usize {
    let two_h = 2 * half_steps;
    let cut = if level >= 0 {
        (two_h as u128) << level as u32
    } else {
        (two_h as u128) >> (-level).min(127) as u32
    };
    cut.min((two_h - 1) as u128) as usize
}

/// Propagator kernel entry by direct summation over the truncated
/// frequency set:
/// `K_{t,N}(x,x') = Σ_{max ξ_j ≤ πN/h} e^{-itP_h(ξ)} e(x,ξ) e(x',ξ)`.
pub fn kernel_point_direct<T: Real>(
    lattice: &FiniteLattice<T>,
    t: T,
    level: i32,
    x: &[usize],
    y: &[usize],
) -> Result<Complex<T>> {
    let d = lattice.dim();
    let n = lattice.interior_per_axis();
    if x.len() != d || y.len() != d {
        return Err(CoreError::InvalidParameter("point arity mismatch".into()));
    }
    if x.iter().chain(y.iter()).any(|&i| i >= n) {
        return Err(CoreError::OutOfDomain);
    }
    let cut = kernel_cutoff(lattice.half_steps(), level);
    let h = lattice.spacing();
    let half = lattice.half_side();
    let norm = half.powi(d as i32).recip();
    let mut acc = Complex::new(T::zero(), T::zero());
    // iterate the truncated frequency cube
    let mut m = [1usize; MAX_DIM];
    loop {
        let mut xi = [T::zero(); MAX_DIM];
        for j in 0..d {
            xi[j] = lattice.frequency(m[j]);
        }
        let phase = Complex::from_polar(T::one(), -t * symbol_ph(h, &xi[..d]));
        let mut prod = norm;
        for j in 0..d {
            prod = prod
                * ((lattice.coord(x[j]) + half) * xi[j]).sin()
                * ((lattice.coord(y[j]) + half) * xi[j]).sin();
        }
        acc = acc + phase * prod;
        // advance the multi-index within 1..=cut per axis
        let mut j = d;
        loop {
            if j == 0 {
                return Ok(acc);
            }
            j -= 1;
            if m[j] < cut {
                m[j] += 1;
                for mj in m.iter_mut().take(d).skip(j + 1) {
                    *mj = 1;
                }
                break;
            }
        }
    }
}

/// One-dimensional kernel factor matrix `S[i][i']` for a single axis:
/// `S(x, x') = (1/L) Σ_{0 < ξ ≤ πN/h} e^{-itP_h(ξ)} sin((x+L)ξ) sin((x'+L)ξ)`.
pub fn kernel_axis_factor<T: Real>(
    lattice: &FiniteLattice<T>,
    t: T,
    level: i32,
) -> Vec<Vec<Complex<T>>> {
    let n = lattice.interior_per_axis();
    let cut = kernel_cutoff(lattice.half_steps(), level);
    let h = lattice.spacing();
    let half = lattice.half_side();
    // sine table: sin((x_i + L) ξ_m)
    let sines: Vec<Vec<T>> = (1..=cut)
        .map(|m| {
            let xi = lattice.frequency(m);
            (0..n).map(|i| ((lattice.coord(i) + half) * xi).sin()).collect()
        })
        .collect();
    let phases: Vec<Complex<T>> = (1..=cut)
        .map(|m| {
            let xi = [lattice.frequency(m)];
            Complex::from_polar(T::one(), -t * symbol_ph(h, &xi))
        })
        .collect();
    let inv_l = half.recip();
    let mut out = vec![vec![Complex::new(T::zero(), T::zero()); n]; n];
    for i in 0..n {
        for ip in i..n {
            let mut acc = Complex::new(T::zero(), T::zero());
            for m in 0..cut {
                acc = acc + phases[m] * (sines[m][i] * sines[m][ip]);
            }
            let v = acc * inv_l;
            out[i][ip] = v;
            out[ip][i] = v; // symmetric in (x, x')
        }
    }
    out
}

/// Kernel entry via the separable per-axis factorization.
pub fn kernel_point_factorized<T: Real>(
    factors: &[Vec<Vec<Complex<T>>>],
    x: &[usize],
    y: &[usize],
) -> Complex<T> {
    let mut acc = Complex::new(T::one(), T::zero());
    for (j, f) in factors.iter().enumerate() {
        acc = acc * f[x[j]][y[j]];
    }
    acc
}

/// `sup_{x,x'} |K_{t,N}|`; by the exact factorization this is the product of
/// the per-axis 1-D sups (all axes identical on a cube).
pub fn kernel_sup<T: Real>(lattice: &FiniteLattice<T>, t: T, level: i32) -> T {
    let factor = kernel_axis_factor(lattice, t, level);
    let sup_1d = factor
        .iter()
        .flat_map(|row| row.iter())
        .map(|v| v.norm())
        .fold(T::zero(), |a, b| a.max(b));
    sup_1d.powi(lattice.dim() as i32)
}

/// Nonlinearity selector; the defocusing sign is the model equation,
/// `Focusing` exists behind this flag only, `Off` disables the substep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Nonlinearity {
    Defocusing,
    Focusing,
    Off,
}

impl Nonlinearity {
    fn sign<T: Real>(&self) -> Option<T> {
        match self {
            Nonlinearity::Defocusing => Some(T::one()),
            Nonlinearity::Focusing => Some(-T::one()),
            Nonlinearity::Off => None,
        }
    }
}

/// Strang-splitting configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig<T> {
    pub tau: T,
    pub t_final: T,
    pub nonlinearity: Nonlinearity,
}

impl<T: Real> SolverConfig<T> {
    pub fn new(tau: T, t_final: T, nonlinearity: Nonlinearity) -> Result<Self> {
        if !(tau > T::zero()) {
            return Err(CoreError::InvalidParameter(
                "time step must be positive".into(),
            ));
        }
        if tau > cast::<T>(0.5) {
            return Err(CoreError::InvalidParameter(
                "time step must be at most 0.5".into(),
            ));
        }
        if t_final == T::zero() {
            return Err(CoreError::InvalidParameter(
                "final time must be nonzero".into(),
            ));
        }
        let steps = (t_final.abs() / tau).round();
        if steps < T::one() {
            return Err(CoreError::InvalidParameter(
                "final time smaller than one step".into(),
            ));
        }
        let defect = (steps * tau - t_final.abs()).abs();
        if defect > cast::<T>(1e-9) * t_final.abs().max(T::one()) {
            return Err(CoreError::InvalidParameter(format!(
                "time step does not divide the final time (defect {defect:e})"
            )));
        }
        Ok(Self {
            tau,
            t_final,
            nonlinearity,
        })
    }

    pub fn steps(&self) -> usize {
        (self.t_final.abs() / self.tau)
            .round()
            .to_f64()
            .expect("finite step count") as usize
    }

    /// Signed step landing exactly on `t_final` after `steps()` steps.
    pub fn signed_tau(&self) -> T {
        self.t_final / cast_usize::<T>(self.steps())
    }
}

/// Time-ordered snapshots of a solution.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    times: Vec<T>,
    states: Vec<GridFunction<T>>,
}

impl<T: Real> Trajectory<T> {
    pub fn new(times: Vec<T>, states: Vec<GridFunction<T>>) -> Result<Self> {
        if times.is_empty() || times.len() != states.len() {
            return Err(CoreError::InvalidParameter(
                "trajectory needs matching nonempty times and states".into(),
            ));
        }
        Ok(Self { times, states })
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn states(&self) -> &[GridFunction<T>] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> &GridFunction<T> {
        self.states.last().expect("nonempty trajectory")
    }
}

/// Strang split-step integrator for `i∂_t w + Δw ∓ |w|²w = 0` on any of the
/// three domains: half nonlinear phase, exact linear step, half nonlinear
/// phase. Snapshots are taken at the requested times, which must sit on the
/// step grid.
pub fn nls_solve<T: Real>(
    w0: &GridFunction<T>,
    config: &SolverConfig<T>,
    snapshot_times: &[T],
) -> Result<Trajectory<T>> {
    let steps = config.steps();
    let tau = config.signed_tau();
    let tol = cast::<T>(1e-9) * config.t_final.abs().max(T::one());

    // map each requested time to a step index
    let mut wanted: Vec<(usize, usize)> = Vec::with_capacity(snapshot_times.len());
    for (slot, &t) in snapshot_times.iter().enumerate() {
        let k = (t / tau).round();
        if (k * tau - t).abs() > tol || k < T::zero() {
            return Err(CoreError::InvalidParameter(format!(
                "snapshot time {t} is not on the step grid"
            )));
        }
        let k = k.to_f64().expect("finite index") as usize;
        if k > steps {
            return Err(CoreError::InvalidParameter(format!(
                "snapshot time {t} beyond the final time"
            )));
        }
        wanted.push((k, slot));
    }
    wanted.sort_unstable();

    let plan = PropagatorPlan::new(*w0.domain(), tau);
    let half_tau = tau / cast::<T>(2.0);
    let sign = config.nonlinearity.sign::<T>();

    let mut out_times = vec![T::zero(); snapshot_times.len()];
    let mut out_states: Vec<Option<GridFunction<T>>> = vec![None; snapshot_times.len()];
    let mut record = |k: usize,
                      state: &GridFunction<T>,
                      wanted: &[(usize, usize)],
                      cursor: &mut usize| {
        while *cursor < wanted.len() && wanted[*cursor].0 == k {
            let slot = wanted[*cursor].1;
            out_times[slot] = cast_usize::<T>(k) * tau;
            out_states[slot] = Some(state.clone());
            *cursor += 1;
        }
    };

    let mut cursor = 0usize;
    let mut state = w0.clone();
    record(0, &state, &wanted, &mut cursor);

    let phase_step = |values: &mut [Complex<T>], g: T, dt: T| {
        for v in values.iter_mut() {
            let angle = -g * dt * v.norm_sqr();
            *v = *v * Complex::from_polar(T::one(), angle);
        }
    };

    for k in 1..=steps {
        if let Some(g) = sign {
            phase_step(state.values_mut(), g, half_tau);
        }
        let mut work = state.into_values();
        plan.apply_in_place(&mut work);
        state = GridFunction::from_values(*w0.domain(), work)?;
        if let Some(g) = sign {
            phase_step(state.values_mut(), g, half_tau);
        }
        if (k % 64 == 0 || k == steps)
            && state
                .values()
                .iter()
                .any(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(CoreError::NonFinite { step: k });
        }
        record(k, &state, &wanted, &mut cursor);
    }

    let states = out_states
        .into_iter()
        .map(|s| s.expect("all snapshots recorded"))
        .collect();
    Trajectory::new(out_times, states)
}

/// Pseudospectral reference solve on the continuum grid, with a tail-mass
/// gate: the datum must carry less than `1e-10` of its mass outside the
/// centred half-box.
pub fn continuum_solve<T: Real>(
    u0: &GridFunction<T>,
    t_final: T,
    tau: T,
    nonlinearity: Nonlinearity,
) -> Result<GridFunction<T>> {
    u0.domain().as_continuum()?;
    let fraction = crate::analysis::tail_mass_fraction(u0, cast::<T>(0.5));
    let limit = cast::<T>(1e-10);
    if fraction > limit {
        return Err(CoreError::TailMass {
            fraction: fraction.to_f64().unwrap_or(f64::NAN),
            limit: 1e-10,
        });
    }
    let config = SolverConfig::new(tau, t_final, nonlinearity)?;
    let traj = nls_solve(u0, &config, &[t_final])?;
    Ok(traj.states().last().expect("snapshot recorded").clone())
}

/// Direction of the small-amplitude change of variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RescaleDirection {
    /// `w_h(t̃, x) = h·w(h² t̃, h x)`: spacing-h solution → unit lattice.
    ToUnit,
    /// Inverse map: unit-lattice solution → spacing-h lattice.
    FromUnit,
}

/// Pure reindex/scale bridge between the spacing-`h` lattice and the
/// unit-spacing lattice `Ω̃`: values scale by `h^{±1}`, times by `h^{∓2}`;
/// the round trip is the identity to one ulp.
pub fn small_amplitude_rescale<T: Real>(
    trajectory: &Trajectory<T>,
    direction: RescaleDirection,
    spacing: T,
) -> Result<Trajectory<T>> {
    if !(spacing > T::zero()) {
        return Err(CoreError::InvalidParameter("spacing must be positive".into()));
    }
    let h2 = spacing * spacing;
    let mut times = Vec::with_capacity(trajectory.len());
    let mut states = Vec::with_capacity(trajectory.len());
    for (t, state) in trajectory.times().iter().zip(trajectory.states()) {
        let lat = state.domain().as_finite()?;
        let (target, amp, new_t) = match direction {
            RescaleDirection::ToUnit => {
                if lat.spacing() != spacing {
                    return Err(CoreError::InvalidParameter(
                        "trajectory spacing differs from the stated one".into(),
                    ));
                }
                (
                    FiniteLattice::unit_spacing(lat.dim(), lat.half_steps())?,
                    Complex::new(spacing, T::zero()),
                    *t / h2,
                )
            }
            RescaleDirection::FromUnit => {
                if lat.spacing() != T::one() {
                    return Err(CoreError::InvalidParameter(
                        "expected a unit-spacing trajectory".into(),
                    ));
                }
                (
                    FiniteLattice::new(lat.dim(), spacing, lat.half_steps())?,
                    Complex::new(spacing.recip(), T::zero()),
                    *t * h2,
                )
            }
        };
        times.push(new_t);
        states.push(GridFunction::from_values(
            Domain::Finite(target),
            state.values().iter().map(|&v| v * amp).collect(),
        )?);
    }
    Trajectory::new(times, states)
}
