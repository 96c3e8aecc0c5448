//! Time-averaged `L^∞` growth: for the nonlinear solution on `Ω`,
//! `‖w‖_{L^q_t([0,T]; L^∞)} / ⟨T⟩^{1/q}` with
//! `q = 2(1 + min(α,1))/(d - 2 + δ)` must stay bounded across the T-sweep —
//! within 2× of its `T = 1` value.

use dnls_core::analysis::strichartz_norm;
use dnls_core::dynamics::{nls_solve, SolverConfig, Trajectory};
use dnls_core::lattice::LatticeSpec;

use crate::config::ExperimentConfig;
use crate::data::omega_datum;
use crate::experiments::timed;
use crate::records::{Records, Report};
use crate::HarnessError;

const GROWTH_LIMIT: f64 = 2.0;

/// `q = 2(1 + min(α,1)) / (d - 2 + δ)`.
pub(crate) fn linfty_exponent(d: usize, alpha: f64, delta: f64) -> f64 {
    2.0 * (1.0 + alpha.min(1.0)) / (d as f64 - 2.0 + delta)
}

/// Japanese bracket `⟨T⟩ = (1 + T²)^{1/2}`.
pub(crate) fn bracket(t: f64) -> f64 {
    (1.0 + t * t).sqrt()
}

/// Solve on `Ω` to `t_max` with evenly strided snapshots.
pub(crate) fn solve_with_snapshots(
    cfg: &ExperimentConfig,
    t_max: f64,
) -> Result<(LatticeSpec, Trajectory<f64>), HarnessError> {
    let k = *cfg
        .k_list
        .first()
        .ok_or_else(|| HarnessError::Config("needs k_list".into()))?;
    let radius = if cfg.r_list.is_empty() {
        cfg.resolve_r(k)?
    } else {
        cfg.r_list[0]
    };
    let spec = LatticeSpec::new(cfg.dimension, k, radius, cfg.alpha)
        .map_err(|e| HarnessError::Config(e.to_string()))?;
    let w0 = omega_datum(&spec, &cfg.datum, true)?;
    let solver = SolverConfig::new(cfg.tau, t_max, cfg.nonlinearity.to_core())?;
    let steps = solver.steps();
    let stride = cfg
        .snapshot_stride
        .unwrap_or_else(|| ((0.01 / cfg.tau).round() as usize).max(1));
    let mut snapshot_times: Vec<f64> = (0..=steps)
        .step_by(stride.max(1))
        .map(|k| t_max * k as f64 / steps as f64)
        .collect();
    if *snapshot_times.last().unwrap() < t_max {
        snapshot_times.push(t_max);
    }
    let traj = nls_solve(&w0, &solver, &snapshot_times)?;
    Ok((spec, traj))
}

pub fn run(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    let t_list = if cfg.t_list.is_empty() {
        vec![1.0, 2.0, 4.0]
    } else {
        cfg.t_list.clone()
    };
    if !t_list.contains(&1.0) {
        return Err(HarnessError::Config(
            "linfty T-sweep must contain T = 1 (the normalization point)".into(),
        ));
    }
    if !(cfg.delta > 0.0 && cfg.delta < 1.0) {
        return Err(HarnessError::Config("delta must lie in (0, 1)".into()));
    }
    let t_max = t_list.iter().cloned().fold(0.0, f64::max);
    let q = linfty_exponent(cfg.dimension, cfg.alpha, cfg.delta);

    let ((spec, traj), solve_ms) = {
        let (res, ms) = timed(|| solve_with_snapshots(cfg, t_max));
        (res?, ms)
    };

    let mut records = Records::new(vec!["T", "q", "strichartz_linfty", "bracket", "normalized"]);
    let mut normalized = Vec::new();
    for &t in &t_list {
        let value = strichartz_norm(&traj, q, f64::INFINITY, (0.0, t))?;
        let norm = value / bracket(t).powf(1.0 / q);
        records.push(vec![t, q, value, bracket(t), norm]);
        normalized.push((t, norm));
    }
    let base = normalized
        .iter()
        .find(|(t, _)| *t == 1.0)
        .map(|(_, v)| *v)
        .expect("T = 1 present");
    // a zero datum has every measured norm zero; the growth bound is vacuous
    let worst_ratio = if base == 0.0 {
        if normalized.iter().all(|(_, v)| *v == 0.0) {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        normalized
            .iter()
            .map(|(_, v)| v / base)
            .fold(0.0, f64::max)
    };

    let mut report = Report::new(cfg.experiment, records);
    report.runtimes_ms.push(("solve".into(), solve_ms));
    report.check(
        "normalized L^q_t L^inf bounded within 2x of its T=1 value",
        worst_ratio <= GROWTH_LIMIT,
        format!("worst ratio {worst_ratio:.3} (q = {q:.2})"),
    );
    report.summary.insert("q".into(), q.into());
    report.summary.insert("worst_ratio".into(), worst_ratio.into());
    report.summary.insert(
        "spec".into(),
        format!("d={} K={} R={}", spec.dim(), spec.k(), spec.r()).into(),
    );
    report.plot_blocks.push((
        "normalized growth".into(),
        normalized,
    ));
    Ok(report)
}
