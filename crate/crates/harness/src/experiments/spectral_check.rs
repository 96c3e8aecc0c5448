//! Exact spectral identities at desk scale: orthonormality of the sine
//! eigenbasis, the eigenvalue equation against the stencil, completeness,
//! and the elementary cosine-sum formula behind the orthonormality proof.

use rayon::prelude::*;

use dnls_core::calculus::laplacian_omega;
use dnls_core::lattice::LatticeSpec;
use dnls_core::spectral::{eigenfunction_grid, symbol_ph};

use crate::config::ExperimentConfig;
use crate::experiments::timed;
use crate::records::{Records, Report};
use crate::HarnessError;

const MAX_POINTS: usize = 4096;
const IDENTITY_TOL: f64 = 1e-10;
const COMPLETENESS_TOL: f64 = 1e-8;

struct SpecDefects {
    spec: LatticeSpec,
    orthonormality: f64,
    eigen: f64,
    completeness: f64,
}

/// 1-D Gram matrix of the sine factors by direct summation:
/// `g(m, m') = (h/L) Σ_x sin((x+L)ξ_m) sin((x+L)ξ_{m'})`.
fn axis_gram(spec: &LatticeSpec) -> Vec<Vec<f64>> {
    let lat = spec.lattice::<f64>();
    let n = lat.interior_per_axis();
    let half = lat.half_side();
    let weight = lat.spacing() / half;
    let sines: Vec<Vec<f64>> = (1..=n)
        .map(|m| {
            let xi = lat.frequency(m);
            (0..n).map(|i| ((lat.coord(i) + half) * xi).sin()).collect()
        })
        .collect();
    let mut gram = vec![vec![0.0; n]; n];
    for a in 0..n {
        for b in a..n {
            let s: f64 = (0..n).map(|i| sines[a][i] * sines[b][i]).sum();
            gram[a][b] = weight * s;
            gram[b][a] = weight * s;
        }
    }
    gram
}

/// 1-D completeness matrix `c(i, i') = h Σ_m e-factor(i) e-factor(i')`,
/// which must be `δ_{i,i'}` (so that `Σ_ξ e(x,ξ)e(x',ξ) = δ_{x,x'}/h^d`).
fn axis_completeness(spec: &LatticeSpec) -> Vec<Vec<f64>> {
    let lat = spec.lattice::<f64>();
    let n = lat.interior_per_axis();
    let half = lat.half_side();
    let weight = lat.spacing() / half;
    let sines: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let base = lat.coord(i) + half;
            (1..=n).map(|m| (base * lat.frequency(m)).sin()).collect()
        })
        .collect();
    let mut comp = vec![vec![0.0; n]; n];
    for a in 0..n {
        for b in a..n {
            let s: f64 = (0..n).map(|m| sines[a][m] * sines[b][m]).sum();
            comp[a][b] = weight * s;
            comp[b][a] = weight * s;
        }
    }
    comp
}

fn defects_for(spec: &LatticeSpec) -> Result<SpecDefects, HarnessError> {
    let d = spec.dim();
    let lat = spec.lattice::<f64>();
    let idx = lat.indexer();

    // orthonormality: ⟨e(ξ), e(ξ')⟩ factorizes exactly into 1-D sums
    let gram = axis_gram(spec);
    let mut ortho: f64 = 0.0;
    for (_, ma) in idx.iter() {
        for (_, mb) in idx.iter() {
            let mut prod = 1.0;
            for j in 0..d {
                prod *= gram[ma[j]][mb[j]];
            }
            let delta = if (0..d).all(|j| ma[j] == mb[j]) { 1.0 } else { 0.0 };
            ortho = ortho.max((prod - delta).abs());
        }
    }

    // eigenvalue equation: -Δ_Ω e(·,ξ) = P_h(ξ) e(·,ξ)
    let eigen = idx
        .iter()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(_, mi)| {
            let m: Vec<usize> = (0..d).map(|j| mi[j] + 1).collect();
            let e = eigenfunction_grid(&lat, &m).expect("interior frequency");
            let lap = laplacian_omega(&e).expect("finite domain");
            let xi: Vec<f64> = (0..d).map(|j| lat.frequency(mi[j] + 1)).collect();
            let p = symbol_ph(lat.spacing(), &xi);
            let defect = lap
                .axpy(num_complex::Complex::new(p, 0.0), &e)
                .expect("same domain")
                .max_abs();
            defect / (1.0 + p)
        })
        .reduce(|| 0.0, f64::max);

    // completeness: Σ_ξ e(x,ξ) e(x',ξ) = δ_{x,x'} / h^d, relative defect
    let comp = axis_completeness(spec);
    let mut completeness: f64 = 0.0;
    for (_, xa) in idx.iter() {
        for (_, xb) in idx.iter() {
            let mut prod = 1.0;
            for j in 0..d {
                prod *= comp[xa[j]][xb[j]];
            }
            let delta = if (0..d).all(|j| xa[j] == xb[j]) { 1.0 } else { 0.0 };
            completeness = completeness.max((prod - delta).abs());
        }
    }

    Ok(SpecDefects {
        spec: *spec,
        orthonormality: ortho,
        eigen,
        completeness,
    })
}

/// Elementary cosine-sum identity `Σ_{j=1}^{L} cos(jθ) =
/// sin((2L+1)θ/2)/(2 sin(θ/2)) - 1/2` over a θ-grid avoiding `2πZ`.
fn cosine_sum_defect() -> f64 {
    let mut worst: f64 = 0.0;
    for l in [1usize, 2, 3, 5, 10, 50, 111] {
        for k in 1..360 {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / 360.0;
            let lhs: f64 = (1..=l).map(|j| (j as f64 * theta).cos()).sum();
            let rhs = ((2 * l + 1) as f64 * theta / 2.0).sin() / (2.0 * (theta / 2.0).sin()) - 0.5;
            worst = worst.max((lhs - rhs).abs());
        }
    }
    worst
}

pub fn run(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    let r_list = if cfg.r_list.is_empty() { vec![1] } else { cfg.r_list.clone() };
    let k_list = if cfg.k_list.is_empty() {
        return Err(HarnessError::Config("spectral-check needs k_list".into()));
    } else {
        cfg.k_list.clone()
    };

    let mut specs = Vec::new();
    for &k in &k_list {
        for &r in &r_list {
            let spec = LatticeSpec::new(cfg.dimension, k, r, cfg.alpha)
                .map_err(|e| HarnessError::Config(e.to_string()))?;
            if spec.interior_len() > MAX_POINTS {
                return Err(HarnessError::Config(format!(
                    "spec (d={}, K={k}, R={r}) has {} points, beyond the {MAX_POINTS}-point direct oracle",
                    cfg.dimension,
                    spec.interior_len()
                )));
            }
            specs.push(spec);
        }
    }

    let mut records = Records::new(vec![
        "d",
        "K",
        "R",
        "points",
        "orthonormality_defect",
        "eigen_defect",
        "completeness_defect",
    ]);
    let mut report = Report::new(cfg.experiment, Records::new(vec![]));

    let (results, ms) = timed(|| -> Result<Vec<SpecDefects>, HarnessError> {
        specs.par_iter().map(defects_for).collect()
    });
    let results = results?;
    report.runtimes_ms.push(("spec sweep".into(), ms));

    let mut max_ortho: f64 = 0.0;
    let mut max_eigen: f64 = 0.0;
    let mut max_comp: f64 = 0.0;
    for r in &results {
        records.push(vec![
            r.spec.dim() as f64,
            r.spec.k() as f64,
            r.spec.r() as f64,
            r.spec.interior_len() as f64,
            r.orthonormality,
            r.eigen,
            r.completeness,
        ]);
        max_ortho = max_ortho.max(r.orthonormality);
        max_eigen = max_eigen.max(r.eigen);
        max_comp = max_comp.max(r.completeness);
    }

    let (cos_defect, cos_ms) = timed(cosine_sum_defect);
    report.runtimes_ms.push(("cosine-sum grid".into(), cos_ms));

    report.records = records;
    report.check(
        "orthonormality defect < 1e-10",
        max_ortho < IDENTITY_TOL,
        format!("max {max_ortho:.3e} over {} specs", results.len()),
    );
    report.check(
        "eigenvalue-equation defect < 1e-10",
        max_eigen < IDENTITY_TOL,
        format!("max {max_eigen:.3e} (relative to 1 + P_h)"),
    );
    report.check(
        "completeness defect < 1e-8",
        max_comp < COMPLETENESS_TOL,
        format!("max {max_comp:.3e}"),
    );
    report.check(
        "cosine-sum identity defect < 1e-10",
        cos_defect < IDENTITY_TOL,
        format!("max {cos_defect:.3e} over the θ-grid"),
    );

    report.summary.insert("max_orthonormality_defect".into(), max_ortho.into());
    report.summary.insert("max_eigen_defect".into(), max_eigen.into());
    report.summary.insert("max_completeness_defect".into(), max_comp.into());
    report.summary.insert("cosine_sum_defect".into(), cos_defect.into());
    Ok(report)
}
