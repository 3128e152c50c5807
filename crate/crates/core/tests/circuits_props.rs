use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix2};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use phononic::circuits::*;
use phononic::{Error, C64};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Dense product of embedded 2x2 blocks, independent of `MeshPlan::apply`.
fn dense(plan: &MeshPlan) -> DMatrix<C64> {
    let n = plan.screen.len();
    let mut m = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        n,
        plan.screen.iter().map(|p| C64::from_polar(1.0, *p)),
    ));
    for e in &plan.elements {
        let mut t = DMatrix::<C64>::identity(n, n);
        let (s, co) = (0.5 * e.theta).sin_cos();
        let ep = C64::from_polar(1.0, 0.5 * e.phi);
        t[(e.i, e.i)] = c(0.0, 1.0) * ep * s;
        t[(e.i, e.i + 1)] = c(0.0, 1.0) * ep * co;
        t[(e.i + 1, e.i)] = c(0.0, 1.0) * ep.conj() * co;
        t[(e.i + 1, e.i + 1)] = c(0.0, -1.0) * ep.conj() * s;
        m = t * m;
    }
    m
}

fn max_abs2(m: &Matrix2<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[test]
fn haar_round_trips_for_small_meshes() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 1..=8 {
        for _ in 0..5 {
            let u = haar_unitary(n, &mut rng);
            assert!(unitarity_defect(&u) < 1e-12);
            let plan = reck_decompose(&u).unwrap();
            assert_eq!(plan.elements.len(), n * (n - 1) / 2);
            assert!(plan.elements.iter().all(|e| e.i + 1 < n));
            assert!(max_deviation(&dense(&plan), &u) < 1e-12);
            assert!(max_deviation(&plan.to_matrix().unwrap(), &u) < 1e-12);
        }
    }
}

#[test]
fn decomposition_is_deterministic() {
    let u = haar_unitary(6, &mut ChaCha8Rng::seed_from_u64(3));
    assert_eq!(reck_decompose(&u).unwrap(), reck_decompose(&u).unwrap());
}

#[test]
fn permutations_and_diagonals_decompose() {
    let n = 5;
    let swap = DMatrix::from_fn(n, n, |i, j| if i + j == n - 1 { c(1.0, 0.0) } else { c(0.0, 0.0) });
    let diag = DMatrix::from_fn(n, n, |i, j| if i == j { C64::from_polar(1.0, i as f64) } else { c(0.0, 0.0) });
    for u in [swap, diag, DMatrix::identity(n, n)] {
        let plan = reck_decompose(&u).unwrap();
        assert!(max_deviation(&plan.to_matrix().unwrap(), &u) < 1e-14);
    }
}

#[test]
fn rejects_non_unitary_and_ragged_input() {
    let mut u = DMatrix::<C64>::identity(3, 3);
    u[(0, 1)] = c(1e-6, 0.0);
    assert!(matches!(reck_decompose(&u), Err(Error::NotUnitary { .. })));
    let rect = DMatrix::<C64>::zeros(2, 3);
    assert!(reck_decompose(&rect).is_err());
    assert!(parse_unitary_csv("1,0,0\n0,0,1,0\n").is_err());
    assert!(parse_unitary_csv("").is_err());
}

#[test]
fn csv_round_trip_is_exact() {
    let u = haar_unitary(4, &mut ChaCha8Rng::seed_from_u64(11));
    assert_eq!(parse_unitary_csv(&write_unitary_csv(&u)).unwrap(), u);
}

#[test]
fn identity_plan_passes_light_unchanged() {
    let plan = MeshPlan::identity(4);
    let x = vec![c(0.3, 0.1), c(-0.2, 0.0), c(0.0, 0.5), c(0.7, -0.7)];
    assert_eq!(plan.apply(&x).unwrap(), x);
    assert!(matches!(plan.apply(&x[..3]), Err(Error::DimensionMismatch { .. })));
}

#[test]
fn calibration_interpolates_and_refuses_extrapolation() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/data/bias_calibration.csv")).unwrap();
    let cal = CalibrationCurve::from_csv(&text).unwrap();
    assert_eq!(cal.quantity, CalibrationQuantity::DeltaF);
    for &(v, y) in &cal.points {
        assert_eq!(cal.value_at(v).unwrap(), y);
    }
    let (lo, hi) = cal.range();
    assert!(matches!(cal.value_at(hi + 1.0), Err(Error::OutOfRange { .. })));
    assert!(matches!(cal.value_at(lo - 1e-9), Err(Error::OutOfRange { .. })));
    let ys: Vec<f64> = (0..=1000).map(|k| cal.value_at(lo + (hi - lo) * k as f64 / 1000.0).unwrap()).collect();
    assert!(ys.windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn phase_tables_scale_with_length() {
    let cal = CalibrationCurve::new(CalibrationQuantity::Phase, vec![(0.0, 0.0), (10.0, 0.01)]).unwrap();
    let one = phase_from_voltage(&cal, 5.0, 100.0, 312.0, 530e-9).unwrap();
    let two = phase_from_voltage(&cal, 5.0, 200.0, 312.0, 530e-9).unwrap();
    assert!((one - 0.5).abs() < 1e-12);
    assert!((two - 2.0 * one).abs() < 1e-12);
}

#[test]
fn frequency_tables_follow_group_velocity() {
    let cal = CalibrationCurve::new(CalibrationQuantity::DeltaF, vec![(0.0, 0.0), (10.0, 1e6)]).unwrap();
    let (vg, a, n) = (312.0, 530e-9, 1000.0);
    let phi = phase_from_voltage(&cal, 10.0, n, vg, a).unwrap();
    assert!((phi + 2.0 * PI * 1e6 * n * a / vg).abs() < 1e-12 * phi.abs());
    let neg = CalibrationCurve::new(CalibrationQuantity::DeltaF, vec![(0.0, -1e6), (10.0, 0.0)]).unwrap();
    assert!((phase_from_voltage(&neg, 0.0, n, vg, a).unwrap() + phi).abs() < 1e-12 * phi.abs());
}

#[test]
fn mirror_threshold() {
    assert_eq!(mirror_state(-5e6, 5e6).unwrap(), MirrorState::Reflecting);
    assert_eq!(mirror_state(-4.999e6, 5e6).unwrap(), MirrorState::Propagating);
    assert_eq!(mirror_state(1e6, 5e6).unwrap(), MirrorState::Propagating);
    assert!(mirror_state(0.0, 0.0).is_err());
}

proptest! {
    #[test]
    fn primitives_compose_to_the_element(theta in -2.0 * PI..2.0 * PI, phi in -2.0 * PI..2.0 * PI) {
        let a = mzi_unitary(theta, phi);
        prop_assert!(max_abs2(&(mzi_from_primitives(theta, phi) - a)) < 1e-14);
        prop_assert!(max_abs2(&(a.adjoint() * a - Matrix2::identity())) < 1e-14);
        prop_assert!((a.determinant().norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn quadrature_powers(theta in -PI..PI) {
        let (p1, p2) = interferometer_output_powers(theta);
        prop_assert!((p1 - 0.5 * (1.0 + theta.sin())).abs() < 1e-14);
        prop_assert!((p2 - 0.5 * (1.0 - theta.sin())).abs() < 1e-14);
    }

    #[test]
    fn mesh_preserves_norm_and_determinant(seed in any::<u64>(), n in 2usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = haar_unitary(n, &mut rng);
        prop_assert!((u.determinant().norm() - 1.0).abs() < 1e-12);
        let plan = reck_decompose(&u).unwrap();
        prop_assert!(max_deviation(&plan.to_matrix().unwrap(), &u) < 1e-12);
        let x: Vec<C64> = (0..n).map(|k| c((k as f64).sin(), (k as f64 * 0.7).cos())).collect();
        let y = plan.apply(&x).unwrap();
        let (nx, ny): (f64, f64) = (x.iter().map(|z| z.norm_sqr()).sum(), y.iter().map(|z| z.norm_sqr()).sum());
        prop_assert!((nx - ny).abs() < 1e-12 * nx);
        for e in &plan.elements {
            prop_assert!((0.0..=PI + 1e-12).contains(&e.theta));
            prop_assert!(e.phi.abs() <= PI + 1e-12);
        }
    }
}
