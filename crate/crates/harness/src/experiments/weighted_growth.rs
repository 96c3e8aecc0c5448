//! Weighted-norm growth: `log ‖φ w(t)‖_{L²}` along the nonlinear flow must
//! be bounded above by an affine function of `t` (growth at most
//! exponential in time). The affine majorant is the least-squares line; the
//! worst upward residual is the margin and must stay small relative to the
//! observed log-range.

use dnls_core::analysis::{weighted_l2, Weight};

use crate::config::ExperimentConfig;
use crate::experiments::linfty::solve_with_snapshots;
use crate::experiments::timed;
use crate::fit::fit_line;
use crate::records::{Records, Report};
use crate::HarnessError;

const ABSOLUTE_MARGIN: f64 = 0.10;
const RELATIVE_MARGIN: f64 = 0.25;

pub fn run(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    let t_max = if cfg.t_list.is_empty() {
        cfg.t_final
    } else {
        cfg.t_list.iter().cloned().fold(0.0, f64::max)
    };
    let ((spec, traj), solve_ms) = {
        let (res, ms) = timed(|| solve_with_snapshots(cfg, t_max));
        (res?, ms)
    };

    let mut records = Records::new(vec!["t", "phi_weighted_l2", "log_phi_weighted_l2"]);
    let mut ts = Vec::new();
    let mut logs = Vec::new();
    let mut curve = Vec::new();
    let mut zero_snapshots = 0usize;
    for (t, state) in traj.times().iter().zip(traj.states()) {
        let v = weighted_l2(state, Weight::Phi)?;
        if v <= 0.0 {
            zero_snapshots += 1;
            continue;
        }
        records.push(vec![*t, v, v.ln()]);
        ts.push(*t);
        logs.push(v.ln());
        curve.push((*t, v.ln()));
    }
    if ts.is_empty() {
        // identically zero trajectory: every measured norm is zero and the
        // affine bound is vacuous
        let mut report = Report::new(cfg.experiment, records);
        report.runtimes_ms.push(("solve".into(), solve_ms));
        report.check(
            "log phi-norm bounded by an affine function of t",
            true,
            format!("all {zero_snapshots} snapshots identically zero"),
        );
        report.summary.insert(
            "spec".into(),
            format!("d={} K={} R={}", spec.dim(), spec.k(), spec.r()).into(),
        );
        return Ok(report);
    }
    if ts.len() < 3 {
        return Err(HarnessError::Config(
            "weighted-growth needs at least three nonzero snapshots".into(),
        ));
    }

    let fit = fit_line(&ts, &logs);
    let range = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - logs.iter().cloned().fold(f64::INFINITY, f64::min);
    let allowance = ABSOLUTE_MARGIN.max(RELATIVE_MARGIN * range);
    let margin = fit.max_upward_residual.max(0.0);

    let mut report = Report::new(cfg.experiment, records);
    report.runtimes_ms.push(("solve".into(), solve_ms));
    report.check(
        "log phi-norm bounded by an affine function of t",
        margin <= allowance,
        format!(
            "upward residual {margin:.4} within allowance {allowance:.4} (slope {:.4})",
            fit.slope
        ),
    );
    report.summary.insert("slope".into(), fit.slope.into());
    report.summary.insert("intercept".into(), fit.intercept.into());
    report.summary.insert("margin".into(), margin.into());
    report.summary.insert("log_range".into(), range.into());
    report.summary.insert(
        "spec".into(),
        format!("d={} K={} R={}", spec.dim(), spec.k(), spec.r()).into(),
    );
    report.plot_blocks.push(("log phi-norm growth".into(), curve));
    Ok(report)
}
