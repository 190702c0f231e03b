use nalgebra::{DMatrix, DVector};
use nilflat::catalog;
use nilflat::geometry::{Brackets, CircleFibration, LeftInvariantGeometry, LeftInvariantMetric, SampleStream};
use nilflat::malcev::NilAlgebra;
use proptest::prelude::*;

fn algebras() -> Vec<NilAlgebra> {
    vec![catalog::h3(), catalog::n4(), catalog::filiform5(), catalog::h5(), catalog::h3_times_r()]
}

/// `G = L Lᵀ + δ I` from lower-triangular entries.
fn metric_from(entries: &[f64], n: usize) -> LeftInvariantMetric {
    let mut l = DMatrix::zeros(n, n);
    let mut it = entries.iter().cycle();
    for i in 0..n {
        for j in 0..=i {
            l[(i, j)] = *it.next().unwrap();
        }
        l[(i, i)] = l[(i, i)].abs() + 0.5;
    }
    LeftInvariantMetric::new(&l * l.transpose()).unwrap()
}

fn vector(entries: &[f64], n: usize, offset: usize) -> DVector<f64> {
    DVector::from_fn(n, |i, _| entries[(offset + i) % entries.len()])
}

fn setup(which: usize, entries: &[f64]) -> LeftInvariantGeometry {
    let alg = &algebras()[which];
    let n = alg.dim();
    LeftInvariantGeometry::new(Brackets::from_algebra(alg), metric_from(entries, n)).unwrap()
}

fn entries() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 15)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn connection_is_levi_civita(which in 0usize..5, m in entries(), v in entries()) {
        let geo = setup(which, &m);
        let n = geo.dim();
        let (x, y, z) = (vector(&v, n, 0), vector(&v, n, 5), vector(&v, n, 10));
        let lc = &geo.connection;
        let torsion = lc.nabla(&x, &y) - lc.nabla(&y, &x) - geo.brackets.bracket(&x, &y);
        prop_assert!(torsion.amax() < 1e-12);
        let compat = geo.metric.inner(&lc.nabla(&x, &y), &z) + geo.metric.inner(&y, &lc.nabla(&x, &z));
        prop_assert!(compat.abs() < 1e-12);
    }

    #[test]
    fn curvature_symmetries(which in 0usize..5, m in entries(), v in entries()) {
        let geo = setup(which, &m);
        let n = geo.dim();
        let (a, b, c, d) = (vector(&v, n, 0), vector(&v, n, 3), vector(&v, n, 7), vector(&v, n, 11));
        let r = |a: &DVector<f64>, b: &DVector<f64>, c: &DVector<f64>, d: &DVector<f64>| geo.curvature.eval(a, b, c, d);
        let base = r(&a, &b, &c, &d);
        let scale = 1.0 + base.abs();
        prop_assert!((base + r(&b, &a, &c, &d)).abs() < 1e-12 * scale);
        prop_assert!((base + r(&a, &b, &d, &c)).abs() < 1e-12 * scale);
        prop_assert!((base - r(&c, &d, &a, &b)).abs() < 1e-12 * scale);
        let bianchi = base + r(&b, &c, &a, &d) + r(&c, &a, &b, &d);
        prop_assert!(bianchi.abs() < 1e-12 * scale);
    }

    #[test]
    fn sectional_curvature_depends_on_plane_only(
        which in 0usize..5, m in entries(), v in entries(),
        coeffs in prop::array::uniform4(-2.0f64..2.0),
    ) {
        let geo = setup(which, &m);
        let n = geo.dim();
        let (x, y) = (vector(&v, n, 0), vector(&v, n, 6));
        let [p, q, r, s] = coeffs;
        prop_assume!((p * s - q * r).abs() > 0.1);
        let Ok(k) = geo.sectional_curvature(&x, &y) else { return Ok(()); };
        let (x2, y2) = (&x * p + &y * q, &x * r + &y * s);
        let k2 = geo.sectional_curvature(&x2, &y2).unwrap();
        prop_assert!((k - k2).abs() < 1e-10 * (1.0 + k.abs()));
    }

    #[test]
    fn homothety_scales_curvature(which in 0usize..5, m in entries(), v in entries(), lambda in 0.1f64..10.0) {
        let geo = setup(which, &m);
        let n = geo.dim();
        let (x, y) = (vector(&v, n, 1), vector(&v, n, 8));
        let scaled = LeftInvariantGeometry::new(geo.brackets.clone(), geo.metric.scaled(lambda).unwrap()).unwrap();
        let Ok(k) = geo.sectional_curvature(&x, &y) else { return Ok(()); };
        let ks = scaled.sectional_curvature(&x, &y).unwrap();
        prop_assert!((ks * lambda - k).abs() < 1e-10 * (1.0 + k.abs()));
    }

    #[test]
    fn decomposition_for_random_metrics(which in 0usize..5, m in entries(), seed in any::<u64>(), t in 1e-4f64..2.0) {
        let alg = &algebras()[which];
        let fib = CircleFibration::top_of(alg, metric_from(&m, alg.dim())).unwrap();
        let var = fib.vary(t).unwrap();
        let stream = SampleStream::new(seed, SampleStream::PLANES);
        for id in 0..8 {
            let s = fib.sample_plane(&var, &stream, id).unwrap();
            let d = fib.decomposition_check(&var, &s);
            prop_assert!(d.max() < 1e-9, "{:?}", d);
            prop_assert!(s.disk_defect(fib.metric()) < 1e-12);
        }
    }
}

#[test]
fn sample_streams_are_reproducible() {
    let fib = CircleFibration::top_of(&catalog::n4(), LeftInvariantMetric::identity(4)).unwrap();
    let var = fib.vary(0.1).unwrap();
    let a = SampleStream::new(3, SampleStream::PLANES);
    let b = SampleStream::new(4, SampleStream::PLANES);
    let s1 = fib.sample_plane(&var, &a, 17).unwrap();
    assert_eq!(s1, fib.sample_plane(&var, &a, 17).unwrap());
    assert_ne!(s1, fib.sample_plane(&var, &a, 18).unwrap());
    assert_ne!(s1, fib.sample_plane(&var, &b, 17).unwrap());
}
