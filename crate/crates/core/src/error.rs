use thiserror::Error;

/// Errors surfaced by lattice construction, transforms and solvers.
#[derive(Error, Debug)]
pub enum CoreError {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain mismatch: expected {expected}, found {found}")]
    DomainMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("value count {found} does not match domain cardinality {expected}")]
    ShapeMismatch { expected: usize, found: usize },

    #[error("point lies outside the lattice domain")]
    OutOfDomain,

    #[error("target box does not contain the source box")]
    BoxTooSmall,

    #[error("support too close to the periodic seam: mass fraction {mass_fraction:.3e} within margin")]
    SeamContamination { mass_fraction: f64 },

    #[error("tail mass precondition violated: fraction {fraction:.3e} exceeds {limit:.3e}")]
    TailMass { fraction: f64, limit: f64 },

    #[error("non-finite value detected at step {step}")]
    NonFinite { step: usize },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("binary format error: {0}")]
    Format(String),
}

pub type Result<T, E = CoreError> = std::result::Result<T, E>;
