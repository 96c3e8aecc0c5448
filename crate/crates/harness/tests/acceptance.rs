//! Acceptance suite: one test per numbered criterion, run at the shipped
//! configurations, printing one pass/fail line per criterion. Run with
//! `cargo test --test acceptance -- --nocapture` to see the lines.

use num_complex::Complex;

use dnls::{run, ExperimentConfig};
use dnls_core::analysis::{energy, l2_norm, mass};
use dnls_core::calculus::weight_shift_residual;
use dnls_core::dynamics::{nls_solve, Nonlinearity, SolverConfig};
use dnls_core::lattice::{Domain, GridFunction, LatticeSpec};
use dnls_core::reference::ode_nls_solve;

fn load(name: &str) -> ExperimentConfig {
    let text = match name {
        "spectral-check-1d" => include_str!("../../../configs/spectral-check-1d.json"),
        "spectral-check-2d" => include_str!("../../../configs/spectral-check-2d.json"),
        "commutator" => include_str!("../../../configs/commutator.json"),
        "dispersive" => include_str!("../../../configs/dispersive.json"),
        "strichartz" => include_str!("../../../configs/strichartz.json"),
        "converge-2d" => include_str!("../../../configs/converge-2d.json"),
        "converge-3d" => include_str!("../../../configs/converge-3d.json"),
        "linfty" => include_str!("../../../configs/linfty.json"),
        "weighted-growth" => include_str!("../../../configs/weighted-growth.json"),
        "small-amplitude-1d" => include_str!("../../../configs/small-amplitude-1d.json"),
        "small-amplitude-2d" => include_str!("../../../configs/small-amplitude-2d.json"),
        other => panic!("unknown config {other}"),
    };
    ExperimentConfig::from_json(text).expect("shipped config parses")
}

fn criterion_line(number: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "[criterion {number}] {} — {name}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {number} failed: {name}: {detail}");
}

#[test]
fn criterion_1_spectral_exactness() {
    for cfg_name in ["spectral-check-1d", "spectral-check-2d"] {
        let report = run(&load(cfg_name)).expect("experiment runs");
        report.print_checks();
        criterion_line(
            1,
            &format!("spectral exactness ({cfg_name})"),
            report.pass(),
            &format!(
                "orthonormality/eigen/completeness/cosine-sum all within tolerance over {} specs",
                report.records.rows().len()
            ),
        );
    }
}

#[test]
fn criterion_2_exact_commutator_identities() {
    // exact x-commutator identity on the 16π periodic box (h = π/8)
    let report = run(&load("commutator")).expect("experiment runs");
    report.print_checks();
    criterion_line(
        2,
        "hZ^d commutator identity < 1e-9 on the 16π box",
        report.pass(),
        "see experiment check lines above",
    );

    // shift identity residual < 1e-12 for every ξ on specs up to 31²
    let specs = [
        LatticeSpec::new(2, 2, 2, 0.0).unwrap(),
        LatticeSpec::new(2, 4, 2, 0.0).unwrap(),
        LatticeSpec::new(2, 8, 2, 0.0).unwrap(),
        LatticeSpec::new(2, 4, 4, 0.0).unwrap(),
        LatticeSpec::new(2, 16, 1, 0.0).unwrap(),
    ];
    let mut worst: f64 = 0.0;
    for spec in &specs {
        let lat = spec.lattice::<f64>();
        assert!(spec.interior_per_axis() <= 31);
        let idx = lat.indexer();
        for (_, mi) in idx.iter() {
            let m = [mi[0] + 1, mi[1] + 1];
            for axis in 0..2 {
                let res = weight_shift_residual(&lat, &m, axis).unwrap();
                worst = worst.max(res);
            }
        }
    }
    criterion_line(
        2,
        "weight shift identity residual < 1e-12 for every ξ up to 31²",
        worst < 1e-12,
        &format!("max residual {worst:.3e} over {} specs", specs.len()),
    );
}

#[test]
fn criterion_3_conservation() {
    let spec = LatticeSpec::new(2, 16, 2, 0.5).unwrap();
    let w0 = dnls::data::omega_datum(
        &spec,
        &dnls::DatumSpec::Gaussian {
            sigma: 1.0,
            amplitude: 1.0,
        },
        true,
    )
    .unwrap();
    let m0 = mass(&w0);
    let e0 = energy(&w0).unwrap();
    let snapshots = [0.25, 0.5, 0.75, 1.0];

    let run_tau = |tau: f64| {
        let config = SolverConfig::new(tau, 1.0, Nonlinearity::Defocusing).unwrap();
        nls_solve(&w0, &config, &snapshots).unwrap()
    };
    let traj = run_tau(1e-3);
    let mass_drift = traj
        .states()
        .iter()
        .map(|s| (mass(s) - m0).abs() / m0)
        .fold(0.0, f64::max);
    criterion_line(
        3,
        "mass drift < 1e-11 over T = 1 at tau = 1e-3 (d=2, K=16, R=2)",
        mass_drift < 1e-11,
        &format!("max relative drift {mass_drift:.3e}"),
    );

    let coarse = run_tau(1e-3);
    let fine = run_tau(5e-4);
    let drift = |t: &dnls_core::dynamics::Trajectory<f64>| {
        (energy(t.last()).unwrap() - e0).abs()
    };
    let ratio = drift(&coarse) / drift(&fine);
    criterion_line(
        3,
        "energy drift ratio under tau-halving in [3, 5]",
        (3.0..=5.0).contains(&ratio),
        &format!(
            "ratio {ratio:.3} (coarse {:.3e}, fine {:.3e})",
            drift(&coarse),
            drift(&fine)
        ),
    );
}

#[test]
fn criterion_4_solver_oracle_equivalence() {
    // d=1, 9 interior points, Strang vs adaptive full-ODE oracle
    let spec = LatticeSpec::new(1, 5, 1, 0.0).unwrap();
    assert_eq!(spec.interior_len(), 9);
    let lat = spec.lattice::<f64>();
    let mut w0 = GridFunction::zeros(Domain::Finite(lat));
    w0.values_mut()[4] = Complex::new(1.0, 0.0);
    let config = SolverConfig::new(1e-4, 1.0, Nonlinearity::Defocusing).unwrap();
    let strang = nls_solve(&w0, &config, &[1.0]).unwrap();
    let oracle = ode_nls_solve(&w0, 1.0, true, 1e-12, 1e-12).unwrap();
    let diff = l2_norm(&strang.last().sub(&oracle).unwrap());
    criterion_line(
        4,
        "Strang vs adaptive ODE oracle, L² difference < 1e-8 at T = 1",
        diff < 1e-8,
        &format!("difference {diff:.3e} (tau = 1e-4, rtol = atol = 1e-12)"),
    );
}

#[test]
fn criterion_5_dispersive_decay() {
    let report = run(&load("dispersive")).expect("experiment runs");
    report.print_checks();
    let spread = report
        .summary
        .get("per_shell_spread")
        .and_then(|v| v.as_f64())
        .unwrap();
    let growth = report
        .summary
        .get("refinement_growth")
        .and_then(|v| v.as_f64())
        .unwrap();
    criterion_line(
        5,
        "compensated dispersive constant: <= 2x sweep variation, no growth under refinement",
        report.pass(),
        &format!("per-shell spread {spread:.3}, refinement growth {growth:.3}"),
    );
}

#[test]
fn criterion_6_strichartz_uniformity() {
    let cfg = load("strichartz");
    // the middle branch of the loss rule at α = 1/2: s = 1.5/q
    let s6 = dnls_core::analysis::loss_exponent(6.0, 0.5, cfg.eps).unwrap();
    let s4 = dnls_core::analysis::loss_exponent(4.0, 0.5, cfg.eps).unwrap();
    assert!((s6 - 0.25).abs() < 1e-15);
    assert!((s4 - 0.375).abs() < 1e-15);
    let report = run(&cfg).expect("experiment runs");
    report.print_checks();
    let min_slope = report
        .summary
        .get("min_slope")
        .and_then(|v| v.as_f64())
        .unwrap();
    criterion_line(
        6,
        "Strichartz ratio slope >= -0.05 over K in {4,8,16,32}, pairs (6,4),(4,8)",
        report.pass(),
        &format!("min fitted slope {min_slope:.4}"),
    );
}

#[test]
fn criterion_7_continuum_limit_rate() {
    let report = run(&load("converge-2d")).expect("experiment runs");
    report.print_checks();
    let slope = report
        .summary
        .get("slope")
        .and_then(|v| v.as_f64())
        .unwrap();
    criterion_line(
        7,
        "continuum-limit slope >= 0.4 (d=2, alpha=1/2, T=1) with the tau gate",
        report.pass(),
        &format!("fitted slope {slope:.4}"),
    );

    let smoke = run(&load("converge-3d")).expect("experiment runs");
    smoke.print_checks();
    criterion_line(
        7,
        "d=3 smoke run (K in {2,4}, R=1), no slope assertion",
        smoke.pass(),
        &format!(
            "errors {:?}",
            smoke
                .records
                .rows()
                .iter()
                .map(|r| r[3])
                .collect::<Vec<_>>()
        ),
    );
}

#[test]
fn criterion_8_scaling_bridge() {
    for cfg_name in ["small-amplitude-1d", "small-amplitude-2d"] {
        let report = run(&load(cfg_name)).expect("experiment runs");
        report.print_checks();
        criterion_line(
            8,
            &format!("scaling bridge ({cfg_name})"),
            report.pass(),
            "rescale/solve agreement < 1e-9 and exact change-of-variables norm factor",
        );
    }
}

#[test]
fn criterion_9_growth_bounds() {
    let linfty = run(&load("linfty")).expect("experiment runs");
    linfty.print_checks();
    let worst = linfty
        .summary
        .get("worst_ratio")
        .and_then(|v| v.as_f64())
        .unwrap();
    criterion_line(
        9,
        "time-averaged L^inf norm bounded within 2x of its T=1 value over T in {1,2,4}",
        linfty.pass(),
        &format!("worst normalized ratio {worst:.3}"),
    );

    let growth = run(&load("weighted-growth")).expect("experiment runs");
    growth.print_checks();
    let slope = growth
        .summary
        .get("slope")
        .and_then(|v| v.as_f64())
        .unwrap();
    let margin = growth
        .summary
        .get("margin")
        .and_then(|v| v.as_f64())
        .unwrap();
    criterion_line(
        9,
        "log phi-weighted norm bounded by an affine function of t",
        growth.pass(),
        &format!("fitted slope {slope:.4}, upward margin {margin:.4}"),
    );
}
