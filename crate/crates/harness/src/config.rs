//! Experiment configuration, mirrored one-to-one by the JSON config files.

use serde::{Deserialize, Serialize};

use crate::HarnessError;

/// Experiment selector; matches the CLI subcommand names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    SpectralCheck,
    Commutator,
    Dispersive,
    Strichartz,
    Linfty,
    WeightedGrowth,
    Converge,
    SmallAmplitude,
    Solve,
}

impl Experiment {
    pub fn tag(&self) -> &'static str {
        match self {
            Experiment::SpectralCheck => "spectral-check",
            Experiment::Commutator => "commutator",
            Experiment::Dispersive => "dispersive",
            Experiment::Strichartz => "strichartz",
            Experiment::Linfty => "linfty",
            Experiment::WeightedGrowth => "weighted-growth",
            Experiment::Converge => "converge",
            Experiment::SmallAmplitude => "small-amplitude",
            Experiment::Solve => "solve",
        }
    }
}

/// Initial-datum selector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum DatumSpec {
    /// `A exp(-|x|²/(2σ²))`, discretized by cell averages.
    Gaussian { sigma: f64, amplitude: f64 },
    /// Eigenfunction `e(·, ξ_m)` with 1-based frequency integers.
    SingleMode { m: Vec<usize> },
    /// Seeded complex Gaussian noise, normalized to unit `L²`.
    Random { seed: u64 },
    /// Concentrated bump: Gaussian of width `width_cells · h`.
    Bump { width_cells: f64, amplitude: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum NonlinearityChoice {
    #[default]
    Defocusing,
    Focusing,
    Off,
}

impl NonlinearityChoice {
    pub fn to_core(self) -> dnls_core::dynamics::Nonlinearity {
        match self {
            NonlinearityChoice::Defocusing => dnls_core::dynamics::Nonlinearity::Defocusing,
            NonlinearityChoice::Focusing => dnls_core::dynamics::Nonlinearity::Focusing,
            NonlinearityChoice::Off => dnls_core::dynamics::Nonlinearity::Off,
        }
    }
}

fn default_alpha() -> f64 {
    0.5
}
fn default_r_constant() -> f64 {
    1.0
}
fn default_t_final() -> f64 {
    1.0
}
fn default_tau() -> f64 {
    1e-3
}
fn default_eps() -> f64 {
    0.05
}
fn default_delta() -> f64 {
    0.1
}
fn default_time_samples() -> usize {
    64
}
fn default_box_factor() -> usize {
    4
}
fn default_seed() -> u64 {
    7
}
fn default_datum() -> DatumSpec {
    DatumSpec::Gaussian {
        sigma: 1.0,
        amplitude: 1.0,
    }
}
fn default_true() -> bool {
    true
}

/// One experiment run, fully specified. Unused fields are ignored by
/// runners that do not need them; every runner validates its own
/// preconditions and reports violations as configuration errors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub dimension: usize,
    #[serde(default)]
    pub k_list: Vec<u32>,
    /// Explicit R sweep; empty means `R = choose_r_for_alpha(K, α, c)`.
    #[serde(default)]
    pub r_list: Vec<u32>,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_r_constant")]
    pub r_constant: f64,
    /// Dyadic band values (powers of two in (0, 1]).
    #[serde(default)]
    pub n_list: Vec<f64>,
    /// Final-time sweep (growth experiments).
    #[serde(default)]
    pub t_list: Vec<f64>,
    #[serde(default = "default_t_final")]
    pub t_final: f64,
    #[serde(default = "default_tau")]
    pub tau: f64,
    #[serde(default = "default_datum")]
    pub datum: DatumSpec,
    /// Slack for the strict loss-exponent branches.
    #[serde(default = "default_eps")]
    pub eps: f64,
    /// δ in the time-averaged L^∞ exponent.
    #[serde(default = "default_delta")]
    pub delta: f64,
    /// Strichartz exponent pairs as strings: integers, fractions or "inf".
    #[serde(default)]
    pub pairs: Vec<(String, String)>,
    #[serde(default = "default_time_samples")]
    pub time_samples: usize,
    /// Periodic truncation side as a multiple of the lattice side.
    #[serde(default = "default_box_factor")]
    pub box_factor: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub emit_plot: bool,
    #[serde(default = "default_true")]
    pub emit_decomposition: bool,
    #[serde(default)]
    pub nonlinearity: NonlinearityChoice,
    /// Continuum reference spacing is `π / ref_spacing_divisor`.
    #[serde(default)]
    pub ref_spacing_divisor: Option<u32>,
    /// Continuum reference half-side is `π · ref_box_half_multiple`.
    #[serde(default)]
    pub ref_box_half_multiple: Option<u32>,
    /// Snapshot every this many steps in trajectory-producing runs.
    #[serde(default)]
    pub snapshot_stride: Option<usize>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.dimension == 0 || self.dimension > 3 {
            return Err(HarnessError::Config(format!(
                "dimension {} not in 1..=3",
                self.dimension
            )));
        }
        if !(self.tau > 0.0 && self.tau <= 0.5) {
            return Err(HarnessError::Config(format!(
                "tau {} outside (0, 0.5]",
                self.tau
            )));
        }
        for &n in &self.n_list {
            if !(n > 0.0 && n <= 1.0) || n.log2().fract() != 0.0 {
                return Err(HarnessError::Config(format!(
                    "band value {n} is not a dyadic value in (0, 1]"
                )));
            }
        }
        if self.k_list.contains(&0) || self.r_list.contains(&0) {
            return Err(HarnessError::Config("K and R entries must be positive".into()));
        }
        if !(self.alpha >= 0.0) {
            return Err(HarnessError::Config("alpha must be nonnegative".into()));
        }
        Ok(())
    }

    /// Resolved R for a given K: explicit list entry or the deterministic rule.
    pub fn resolve_r(&self, k: u32) -> Result<u32, HarnessError> {
        dnls_core::choose_r_for_alpha(k, self.alpha, self.r_constant)
            .map_err(|e| HarnessError::Config(e.to_string()))
    }
}

/// Parse an exponent string: "inf", an integer, or a fraction "a/b".
pub fn parse_exponent(text: &str) -> Result<dnls_core::analysis::Ratio, HarnessError> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
        return Ok(dnls_core::analysis::Ratio::infinity());
    }
    if let Some((a, b)) = t.split_once('/') {
        let num: i64 = a
            .trim()
            .parse()
            .map_err(|_| HarnessError::Config(format!("bad exponent {text}")))?;
        let den: i64 = b
            .trim()
            .parse()
            .map_err(|_| HarnessError::Config(format!("bad exponent {text}")))?;
        if den == 0 {
            return Err(HarnessError::Config(format!("bad exponent {text}")));
        }
        return Ok(dnls_core::analysis::Ratio::new(num, den));
    }
    let num: i64 = t
        .parse()
        .map_err(|_| HarnessError::Config(format!("bad exponent {text}")))?;
    Ok(dnls_core::analysis::Ratio::new(num, 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_round_trips() {
        let text = r#"{
            "experiment": "spectral-check",
            "dimension": 2,
            "k_list": [2, 4]
        }"#;
        let cfg = ExperimentConfig::from_json(text).unwrap();
        assert_eq!(cfg.experiment, Experiment::SpectralCheck);
        assert_eq!(cfg.alpha, 0.5);
        let json = serde_json::to_string(&cfg).unwrap();
        let back = ExperimentConfig::from_json(&json).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn rejects_bad_fields() {
        let bad = r#"{"experiment": "solve", "dimension": 5}"#;
        assert!(ExperimentConfig::from_json(bad).is_err());
        let unknown = r#"{"experiment": "solve", "dimension": 2, "no_such_field": 1}"#;
        assert!(ExperimentConfig::from_json(unknown).is_err());
        let bad_band = r#"{"experiment": "dispersive", "dimension": 2, "n_list": [0.3]}"#;
        assert!(ExperimentConfig::from_json(bad_band).is_err());
    }

    #[test]
    fn exponent_parsing() {
        assert!(parse_exponent("inf").unwrap().is_infinite());
        assert_eq!(parse_exponent("6").unwrap(), dnls_core::analysis::Ratio::new(6, 1));
        assert_eq!(
            parse_exponent("8/3").unwrap(),
            dnls_core::analysis::Ratio::new(8, 3)
        );
        assert!(parse_exponent("x").is_err());
        assert!(parse_exponent("1/0").is_err());
    }
}
