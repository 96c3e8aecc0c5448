//! Experiment pipelines reproducing the quantitative behaviour of the
//! discrete NLS laboratory at desk scale, plus the `dnls` CLI surface.
//!
//! Each experiment consumes an [`config::ExperimentConfig`], runs a sweep,
//! and produces a [`records::Report`]: pass/fail check lines, a
//! deterministic `records.csv`, a `summary.json` with fitted slopes and
//! measured constants, and optional gnuplot blocks. Sweep points execute in
//! a work-stealing pool; records are merged in sweep order so output is
//! reproducible for a fixed seed.

pub mod config;
pub mod data;
pub mod experiments;
pub mod fit;
pub mod records;

use thiserror::Error;

pub use config::{DatumSpec, Experiment, ExperimentConfig};
pub use records::{CheckLine, Records, Report};

#[derive(Error, Debug)]
pub enum HarnessError {
    /// Bad configuration: CLI exits with code 2.
    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] dnls_core::CoreError),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Run the experiment named by the config.
pub fn run(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    cfg.validate()?;
    match cfg.experiment {
        Experiment::SpectralCheck => experiments::spectral_check::run(cfg),
        Experiment::Commutator => experiments::commutator::run(cfg),
        Experiment::Dispersive => experiments::dispersive::run(cfg),
        Experiment::Strichartz => experiments::strichartz::run(cfg),
        Experiment::Linfty => experiments::linfty::run(cfg),
        Experiment::WeightedGrowth => experiments::weighted_growth::run(cfg),
        Experiment::Converge => experiments::converge::run(cfg),
        Experiment::SmallAmplitude => experiments::small_amplitude::run(cfg),
        Experiment::Solve => experiments::solve::run(cfg),
    }
}
