//! Short-time dispersive decay of the propagator kernel: over the window
//! `0 < t ≤ Rh/(2N)` the compensated constant
//! `sup_{x,x'}|K_{t,N}| · (|t|h/N)^{d/3}` must be uniformly bounded —
//! stable within 2× across the `(K, R, N)` sweep and non-growing (≤ 1.25×)
//! under t-grid refinement.

use rayon::prelude::*;

use dnls_core::dynamics::{kernel_axis_factor, kernel_point_direct, kernel_point_factorized, kernel_sup};
use dnls_core::lattice::LatticeSpec;

use crate::config::ExperimentConfig;
use crate::records::{Records, Report};
use crate::HarnessError;

const SPREAD_LIMIT: f64 = 2.0;
const REFINEMENT_LIMIT: f64 = 1.25;
const FACTORIZATION_TOL: f64 = 1e-10;

fn band_level(n: f64) -> i32 {
    n.log2().round() as i32
}

struct ConfigPoint {
    k: u32,
    r: u32,
    n: f64,
    t_window: f64,
    coarse_max: f64,
    fine_max: f64,
    samples: Vec<(f64, f64, f64)>, // (t, sup|K|, compensated)
}

pub fn run(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    if cfg.k_list.is_empty() || cfg.r_list.is_empty() || cfg.n_list.is_empty() {
        return Err(HarnessError::Config(
            "dispersive needs k_list, r_list and n_list".into(),
        ));
    }
    let d = cfg.dimension;
    let n_t = cfg.time_samples.clamp(4, 512);

    let mut combos = Vec::new();
    for &k in &cfg.k_list {
        for &r in &cfg.r_list {
            for &n in &cfg.n_list {
                combos.push((k, r, n));
            }
        }
    }

    let points: Result<Vec<ConfigPoint>, HarnessError> = combos
        .par_iter()
        .map(|&(k, r, n)| {
            let spec = LatticeSpec::new(d, k, r, cfg.alpha)
                .map_err(|e| HarnessError::Config(e.to_string()))?;
            let lat = spec.lattice::<f64>();
            let h = lat.spacing();
            let level = band_level(n);
            let t_window = r as f64 * h / (2.0 * n);
            // nested grids: fine contains coarse
            let fine: Vec<f64> = (1..=2 * n_t)
                .map(|i| t_window * i as f64 / (2 * n_t) as f64)
                .collect();
            let compensation = |t: f64| (t * h / n).powf(d as f64 / 3.0);
            let mut samples = Vec::with_capacity(fine.len());
            let mut coarse_max: f64 = 0.0;
            let mut fine_max: f64 = 0.0;
            for (i, &t) in fine.iter().enumerate() {
                let sup = kernel_sup(&lat, t, level);
                let comp = sup * compensation(t);
                samples.push((t, sup, comp));
                fine_max = fine_max.max(comp);
                if (i + 1) % 2 == 0 {
                    coarse_max = coarse_max.max(comp);
                }
            }
            Ok(ConfigPoint {
                k,
                r,
                n,
                t_window,
                coarse_max,
                fine_max,
                samples,
            })
        })
        .collect();
    let points = points?;

    let mut records = Records::new(vec![
        "K",
        "R",
        "N",
        "t",
        "sup_kernel",
        "compensated",
    ]);
    let mut plot_blocks = Vec::new();
    for p in &points {
        let mut block = Vec::new();
        for &(t, sup, comp) in &p.samples {
            records.push(vec![p.k as f64, p.r as f64, p.n, t, sup, comp]);
            block.push((t, comp));
        }
        plot_blocks.push((format!("K={} R={} N={}", p.k, p.r, p.n), block));
    }

    let mut report = Report::new(cfg.experiment, records);
    report.plot_blocks = plot_blocks;

    // uniformity in the lattice parameters: per dyadic shell N, the
    // per-config maxima must agree within 2x across the (K, R) sweep
    let max_c = points.iter().map(|p| p.fine_max).fold(0.0, f64::max);
    let min_c = points.iter().map(|p| p.fine_max).fold(f64::INFINITY, f64::min);
    let pooled_spread = max_c / min_c;
    let mut spread = 0.0f64;
    for &n in &cfg.n_list {
        let maxima: Vec<f64> = points
            .iter()
            .filter(|p| p.n == n)
            .map(|p| p.fine_max)
            .collect();
        let hi = maxima.iter().cloned().fold(0.0, f64::max);
        let lo = maxima.iter().cloned().fold(f64::INFINITY, f64::min);
        if lo > 0.0 {
            spread = spread.max(hi / lo);
        }
    }
    report.check(
        "compensated constant varies by <= 2x across the (K, R) sweep per shell",
        spread <= SPREAD_LIMIT,
        format!("worst per-shell spread {spread:.3}; pooled over shells {pooled_spread:.3}"),
    );

    // no growth under refinement: fine max vs coarse max, per config
    let worst_growth = points
        .iter()
        .map(|p| p.fine_max / p.coarse_max.max(1e-300))
        .fold(0.0, f64::max);
    report.check(
        "compensated constant grows <= 1.25x under t-grid refinement",
        worst_growth <= REFINEMENT_LIMIT,
        format!("worst refinement growth {worst_growth:.4}"),
    );

    // factorized kernel equals the direct sum on the smallest config
    let (k0, r0, n0) = combos[0];
    let spec0 = LatticeSpec::new(d, k0, r0, cfg.alpha)
        .map_err(|e| HarnessError::Config(e.to_string()))?;
    let lat0 = spec0.lattice::<f64>();
    let level0 = band_level(n0);
    let t0 = points[0].t_window / 2.0;
    let factor = kernel_axis_factor(&lat0, t0, level0);
    let factors = vec![factor; d];
    let n_axis = lat0.interior_per_axis();
    let probes: Vec<usize> = [0, n_axis / 2, n_axis - 1].to_vec();
    let mut worst_fact: f64 = 0.0;
    let mut x = vec![0usize; d];
    let mut y = vec![0usize; d];
    for &ix in &probes {
        for &iy in &probes {
            for j in 0..d {
                x[j] = if j % 2 == 0 { ix } else { iy };
                y[j] = if j % 2 == 0 { iy } else { ix };
            }
            let direct = kernel_point_direct(&lat0, t0, level0, &x, &y)?;
            let fact = kernel_point_factorized(&factors, &x, &y);
            let scale = direct.norm().max(1e-12);
            worst_fact = worst_fact.max((direct - fact).norm() / scale);
        }
    }
    report.check(
        "factorized kernel matches direct summation to 1e-10",
        worst_fact < FACTORIZATION_TOL,
        format!("worst relative mismatch {worst_fact:.3e}"),
    );

    report.summary.insert("max_compensated".into(), max_c.into());
    report.summary.insert("min_compensated".into(), min_c.into());
    report.summary.insert("per_shell_spread".into(), spread.into());
    report.summary.insert("pooled_spread".into(), pooled_spread.into());
    report.summary.insert("refinement_growth".into(), worst_growth.into());
    Ok(report)
}
