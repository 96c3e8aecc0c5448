//! Strichartz uniformity sweep: for lattice-admissible pairs `(q, r)` and
//! the loss exponent `s` from the three-branch rule, the ratio
//! `ρ(h) = ‖e^{itΔ_Ω}w0‖_{L^q_t([0,1];L^r)} / ‖w0‖_{H^s}` must stay
//! uniformly bounded as `h → 0`: the fitted slope of `log ρ` against
//! `log h` may not dip below `-0.05` for any tested datum.

use rayon::prelude::*;

use dnls_core::analysis::{hs_norm, strichartz_norm, AdmissiblePair};
use dnls_core::lattice::{GridFunction, LatticeSpec};

use crate::config::{DatumSpec, ExperimentConfig};
use crate::data::{omega_datum, top_mode};
use crate::experiments::{linear_flow_samples, uniform_times};
use crate::fit::fit_line;
use crate::records::{Records, Report};
use crate::HarnessError;

const SLOPE_FLOOR: f64 = -0.05;
const QUADRATURE_STABILITY: f64 = 0.01;

fn resolve_pairs(cfg: &ExperimentConfig) -> Result<Vec<AdmissiblePair>, HarnessError> {
    if cfg.pairs.is_empty() {
        return Err(HarnessError::Config(
            "strichartz needs exponent pairs, e.g. [[\"6\",\"4\"],[\"4\",\"8\"]]".into(),
        ));
    }
    cfg.pairs
        .iter()
        .map(|(qs, rs)| {
            let q = crate::config::parse_exponent(qs)?;
            let r = crate::config::parse_exponent(rs)?;
            AdmissiblePair::new(q, r, cfg.dimension)
                .map_err(|e| HarnessError::Config(e.to_string()))
        })
        .collect()
}

fn worst_case_data(
    spec: &LatticeSpec,
    cfg: &ExperimentConfig,
) -> Result<Vec<(usize, GridFunction<f64>)>, HarnessError> {
    Ok(vec![
        (0, top_mode(spec)?),
        (1, omega_datum(spec, &DatumSpec::Random { seed: cfg.seed }, false)?),
        (
            2,
            omega_datum(
                spec,
                &DatumSpec::Bump {
                    width_cells: 2.0,
                    amplitude: 1.0,
                },
                true,
            )?,
        ),
    ])
}

struct RhoPoint {
    q: f64,
    r: f64,
    datum_id: usize,
    k: u32,
    radius: u32,
    h: f64,
    s: f64,
    rho: f64,
    quad_shift: f64,
}

pub fn run(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    if cfg.k_list.len() < 2 {
        return Err(HarnessError::Config(
            "strichartz needs at least two K values for a slope".into(),
        ));
    }
    let pairs = resolve_pairs(cfg)?;
    let n_t = cfg.time_samples.clamp(8, 4096);

    let mut jobs = Vec::new();
    for pair in &pairs {
        for &k in &cfg.k_list {
            jobs.push((*pair, k));
        }
    }

    let results: Result<Vec<Vec<RhoPoint>>, HarnessError> = jobs
        .par_iter()
        .map(|(pair, k)| {
            let radius = cfg.resolve_r(*k)?;
            let spec = LatticeSpec::new(cfg.dimension, *k, radius, cfg.alpha)
                .map_err(|e| HarnessError::Config(e.to_string()))?;
            let h = spec.h::<f64>();
            let q: f64 = pair.q().to_float();
            let r: f64 = pair.r().to_float();
            let s = dnls_core::analysis::loss_exponent(q, cfg.alpha, cfg.eps)?;
            let coarse_times = uniform_times(1.0, n_t);
            let fine_times = uniform_times(1.0, 2 * n_t);
            let mut out = Vec::new();
            for (datum_id, w0) in worst_case_data(&spec, cfg)? {
                let sobolev = hs_norm(&w0, s)?;
                let traj = linear_flow_samples(&w0, &coarse_times)?;
                let value = strichartz_norm(&traj, q, r, (0.0, 1.0))?;
                let fine_traj = linear_flow_samples(&w0, &fine_times)?;
                let fine_value = strichartz_norm(&fine_traj, q, r, (0.0, 1.0))?;
                let quad_shift = ((fine_value - value) / value).abs();
                out.push(RhoPoint {
                    q,
                    r,
                    datum_id,
                    k: *k,
                    radius,
                    h,
                    s,
                    rho: fine_value / sobolev,
                    quad_shift,
                });
            }
            Ok(out)
        })
        .collect();
    let points: Vec<RhoPoint> = results?.into_iter().flatten().collect();

    let mut records = Records::new(vec![
        "q", "r", "datum_id", "K", "R", "h", "s", "rho", "quadrature_shift",
    ]);
    for p in &points {
        records.push(vec![
            p.q,
            p.r,
            p.datum_id as f64,
            p.k as f64,
            p.radius as f64,
            p.h,
            p.s,
            p.rho,
            p.quad_shift,
        ]);
    }
    let mut report = Report::new(cfg.experiment, records);

    // fit log ρ against log h per (pair, datum)
    let mut min_slope = f64::INFINITY;
    let mut slopes = serde_json::Map::new();
    let mut plot_blocks = Vec::new();
    for pair in &pairs {
        let q: f64 = pair.q().to_float();
        for datum_id in 0..3usize {
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            let mut block = Vec::new();
            for p in points.iter().filter(|p| p.q == q && p.datum_id == datum_id) {
                xs.push(p.h.ln());
                ys.push(p.rho.ln());
                block.push((p.h, p.rho));
            }
            if xs.len() >= 2 {
                let fit = fit_line(&xs, &ys);
                min_slope = min_slope.min(fit.slope);
                slopes.insert(
                    format!("slope_q_{}_datum_{datum_id}", pair.q()),
                    fit.slope.into(),
                );
                plot_blocks.push((format!("(q,r)=({},{}) datum {datum_id}", pair.q(), pair.r()), block));
            }
        }
    }
    report.plot_blocks = plot_blocks;

    report.check(
        "fitted slope of log rho vs log h >= -0.05 for every pair and datum",
        min_slope >= SLOPE_FLOOR,
        format!("min slope {min_slope:.4}"),
    );
    let worst_quad = points.iter().map(|p| p.quad_shift).fold(0.0, f64::max);
    report.check(
        "time-quadrature refinement shifts the norm by < 1%",
        worst_quad < QUADRATURE_STABILITY,
        format!("worst relative shift {worst_quad:.3e}"),
    );

    report.summary.insert("min_slope".into(), min_slope.into());
    report.summary.insert("slopes".into(), serde_json::Value::Object(slopes));
    report.summary.insert("eps".into(), cfg.eps.into());
    Ok(report)
}
