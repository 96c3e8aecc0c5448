//! Numerical core for the discrete nonlinear Schrödinger equation on finite
//! cubic lattices with zero boundary, periodic truncations of `hZ^d`, and a
//! fine continuum reference grid.
//!
//! The crate provides lattice geometry and grid-function storage
//! ([`lattice`]), the sine eigenbasis of the zero-boundary Laplacian with
//! fast and direct transforms plus dyadic frequency projections
//! ([`spectral`]), finite-difference operators, sampling/localization/
//! extension/interpolation maps and commutators ([`calculus`]), linear
//! propagators and the split-step cubic NLS integrator ([`dynamics`]), and
//! norms, conserved quantities and Strichartz-type functionals
//! ([`analysis`]). Binary snapshot i/o lives in [`io`]; independent
//! reference integrators and closed forms used as test oracles live in
//! [`mod@reference`].
//!
//! All numerics are generic over the working scalar through
//! [`scalar::Real`]; the `*64` aliases below pin `f64`, the precision every
//! quantitative tolerance in this crate is stated for.

pub mod analysis;
pub mod bump;
pub mod calculus;
pub mod dst;
pub mod dynamics;
pub mod error;
pub mod io;
pub mod lattice;
pub mod reference;
pub mod scalar;
pub mod spectral;

pub use error::{CoreError, Result};
pub use lattice::{
    choose_r_for_alpha, ContinuumGrid, Domain, FiniteLattice, GridFunction, Indexer, LatticeSpec,
    PeriodicLattice,
};
pub use scalar::Real;

pub use num_complex::Complex;

/// Working-precision aliases.
pub type Complex64 = num_complex::Complex<f64>;
pub type GridFunction64 = lattice::GridFunction<f64>;
pub type Domain64 = lattice::Domain<f64>;
pub type FiniteLattice64 = lattice::FiniteLattice<f64>;
pub type PeriodicLattice64 = lattice::PeriodicLattice<f64>;
pub type ContinuumGrid64 = lattice::ContinuumGrid<f64>;
pub type SpectralCoeffs64 = spectral::SpectralCoeffs<f64>;
pub type Trajectory64 = dynamics::Trajectory<f64>;
