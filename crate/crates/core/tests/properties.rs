//! Property tests over randomly drawn lattices and fields.

use num_complex::Complex;
use proptest::prelude::*;

use dnls_core::analysis::{inner_product, l2_norm, lp_norm};
use dnls_core::calculus::{extend, localize, resample_to_continuum, LocalizationKernel};
use dnls_core::lattice::{ContinuumGrid, Domain, GridFunction, LatticeSpec, PeriodicLattice};
use dnls_core::spectral::{forward, inverse};

fn grid_from(values: Vec<(f64, f64)>, domain: Domain<f64>) -> GridFunction<f64> {
    let vals = values
        .into_iter()
        .map(|(re, im)| Complex::new(re, im))
        .collect::<Vec<_>>();
    GridFunction::from_values(domain, vals).unwrap()
}

fn small_spec() -> impl Strategy<Value = LatticeSpec> {
    (1usize..=3, 1u32..=4, 1u32..=3).prop_filter_map("cap the point count", |(d, k, r)| {
        let spec = LatticeSpec::new(d, k, r, 0.0).ok()?;
        (spec.interior_len() <= 1_000).then_some(spec)
    })
}

fn field_on(spec: LatticeSpec) -> impl Strategy<Value = GridFunction<f64>> {
    let len = spec.interior_len();
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len)
        .prop_map(move |v| grid_from(v, Domain::Finite(spec.lattice::<f64>())))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn index_round_trip(spec in small_spec(), pick in 0usize..1_000) {
        let idx = spec.lattice::<f64>().indexer();
        let lin = pick % idx.len();
        prop_assert_eq!(idx.lin(&idx.multi(lin)), lin);
        // frequency set has the same cardinality as the interior
        prop_assert_eq!(spec.frequency_len(), spec.interior_len());
    }

    #[test]
    fn transform_round_trip_and_parseval(
        (_spec, f) in small_spec().prop_flat_map(|s| field_on(s).prop_map(move |f| (s, f)))
    ) {
        let coeffs = forward(&f).unwrap();
        let back = inverse(&coeffs).unwrap();
        prop_assert!(back.sub(&f).unwrap().max_abs() < 1e-11);
        let rel = (coeffs.l2_norm() - l2_norm(&f)).abs() / (1.0 + l2_norm(&f));
        prop_assert!(rel < 1e-12);
    }

    #[test]
    fn resample_is_linear(
        (spec, f, g) in small_spec().prop_flat_map(|s| {
            (field_on(s), field_on(s)).prop_map(move |(f, g)| (s, f, g))
        }),
        a in -2.0f64..2.0,
        b in -2.0f64..2.0,
    ) {
        let lat = spec.lattice::<f64>();
        let target = ContinuumGrid::new(
            spec.dim(),
            lat.spacing() / 2.0,
            4 * lat.half_steps() + 4,
        ).unwrap();
        let combined = f
            .scale(Complex::new(a, 0.0))
            .axpy(Complex::new(b, 0.0), &g)
            .unwrap();
        let lhs = resample_to_continuum(&combined, &target).unwrap();
        let rf = resample_to_continuum(&f, &target).unwrap();
        let rg = resample_to_continuum(&g, &target).unwrap();
        let rhs = rf.scale(Complex::new(a, 0.0)).axpy(Complex::new(b, 0.0), &rg).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().max_abs() < 1e-11);
    }

    #[test]
    fn extension_is_lp_isometry(
        (spec, f) in small_spec().prop_flat_map(|s| field_on(s).prop_map(move |f| (s, f))),
        p_sel in 0usize..4,
    ) {
        let lat = spec.lattice::<f64>();
        let per = PeriodicLattice::containing(&lat, 2).unwrap();
        let ext = extend(&f, &per).unwrap();
        let p = [1.0, 2.0, 3.0, f64::INFINITY][p_sel];
        prop_assert_eq!(lp_norm(&ext, p).unwrap(), lp_norm(&f, p).unwrap());
    }

    #[test]
    fn localization_is_contractive_and_commutes_with_tail(
        (_spec, f) in small_spec().prop_flat_map(|s| field_on(s).prop_map(move |f| (s, f))),
        radius in 0.5f64..8.0,
    ) {
        let kernel = LocalizationKernel::new(radius).unwrap();
        let loc = localize(&f, &kernel);
        prop_assert!(l2_norm(&loc) <= l2_norm(&f) * (1.0 + 1e-12));
        // η f + (1-η) f = f
        let tail = dnls_core::calculus::localize_complement(&f, &kernel);
        let sum = loc.axpy(Complex::new(1.0, 0.0), &tail).unwrap();
        prop_assert!(sum.sub(&f).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn cauchy_schwarz_on_random_fields(
        (_spec, f, g) in small_spec().prop_flat_map(|s| {
            (field_on(s), field_on(s)).prop_map(move |(f, g)| (s, f, g))
        }),
    ) {
        let ip = inner_product(&f, &g).unwrap().norm();
        prop_assert!(ip <= l2_norm(&f) * l2_norm(&g) * (1.0 + 1e-12));
    }
}
