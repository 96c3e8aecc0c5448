//! Plain solver run: evolve the configured datum on `Ω` and write the
//! trajectory in the binary grid format plus a JSON manifest with the
//! per-snapshot norms and invariant drifts.

use serde_json::json;

use dnls_core::analysis::{energy, lp_norm, mass};
use dnls_core::io::write_grid;

use crate::config::ExperimentConfig;
use crate::experiments::linfty::solve_with_snapshots;
use crate::records::{Records, Report};
use crate::HarnessError;

const MASS_DRIFT_SANITY: f64 = 1e-9;

pub fn run(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    let (spec, traj) = solve_with_snapshots(cfg, cfg.t_final)?;

    let mut records = Records::new(vec!["t", "mass", "energy", "linf", "mass_drift"]);
    let m0 = mass(&traj.states()[0]);
    let e0 = energy(&traj.states()[0])?;
    let mut manifest_entries = Vec::new();
    let mut artifacts = Vec::new();
    let mut worst_drift: f64 = 0.0;
    for (i, (t, state)) in traj.times().iter().zip(traj.states()).enumerate() {
        let m = mass(state);
        let e = energy(state)?;
        let linf = lp_norm(state, f64::INFINITY)?;
        let drift = if m0 > 0.0 { (m - m0).abs() / m0 } else { 0.0 };
        worst_drift = worst_drift.max(drift);
        records.push(vec![*t, m, e, linf, drift]);
        let name = format!("snapshot_{i:04}.dnls");
        let mut bytes = Vec::new();
        write_grid(&mut bytes, state)?;
        manifest_entries.push(json!({
            "file": name,
            "t": t,
            "mass": m,
            "energy": e,
            "linf": linf,
            "mass_drift": drift,
            "energy_drift": if e0 > 0.0 { (e - e0).abs() / e0 } else { 0.0 },
        }));
        artifacts.push((name, bytes));
    }

    let manifest = json!({
        "format": "DNLS binary grid v1",
        "spec": { "d": spec.dim(), "K": spec.k(), "R": spec.r(), "alpha": spec.alpha() },
        "tau": cfg.tau,
        "t_final": cfg.t_final,
        "snapshots": manifest_entries,
    });

    let mut report = Report::new(cfg.experiment, records);
    report.artifacts = artifacts;
    report.artifacts.push((
        "manifest.json".into(),
        serde_json::to_vec_pretty(&manifest).map_err(|e| HarnessError::Config(e.to_string()))?,
    ));
    report.check(
        "trajectory finite with mass drift < 1e-9",
        worst_drift < MASS_DRIFT_SANITY,
        format!("worst relative mass drift {worst_drift:.3e} over {} snapshots", traj.len()),
    );
    report.summary.insert("snapshots".into(), (traj.len() as f64).into());
    Ok(report)
}
