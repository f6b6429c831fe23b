use approx::assert_abs_diff_eq;
use nalgebra::{Matrix3, Rotation3, Vector3};
use proptest::prelude::*;
use srvt_core::curve::*;
use srvt_core::euclidean::{self, BasedCurve};
use srvt_core::scaling::{scale, unscale};

fn step(dim: usize, n: usize) -> impl Strategy<Value = StepFunction> {
    prop::collection::vec(-10.0f64..10.0, dim * n).prop_map(move |d| StepFunction::new(dim, d).unwrap())
}

fn curve(dim: usize, n: usize) -> impl Strategy<Value = SampledCurve> {
    prop::collection::vec(-5.0f64..5.0, dim * (n + 1)).prop_map(move |d| SampledCurve::new(dim, d).unwrap())
}

fn exponent() -> impl Strategy<Value = PExponent> {
    (1.0f64..6.0).prop_map(|p| PExponent::new(p).unwrap())
}

fn rotate(c: &SampledCurve, o: &Matrix3<f64>) -> SampledCurve {
    c.map_samples(|x| (o * Vector3::from_column_slice(x)).as_slice().to_vec()).unwrap()
}

proptest! {
    #[test]
    fn antiderivative_then_derivative(f in step(3, 24), v in prop::array::uniform3(-5.0f64..5.0)) {
        let back = derivative(&antiderivative(&f, &v).unwrap());
        for (x, y) in back.as_slice().iter().zip(f.as_slice()) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn derivative_then_antiderivative(c in curve(2, 30)) {
        let back = antiderivative(&derivative(&c), c.start()).unwrap();
        for (x, y) in back.as_slice().iter().zip(c.as_slice()) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn sup_norm_bounds(c in curve(3, 20), p in exponent()) {
        let start = c.start().iter().map(|x| x * x).sum::<f64>().sqrt();
        let l1 = lp_norm(&derivative(&c), PExponent::ONE, None).unwrap();
        prop_assert!(sup_norm(&c) <= start + l1 + 1e-12);
        prop_assert!(sup_norm(&c) <= ac_norm(&c, p) * (1.0 + 1e-12));
    }

    #[test]
    fn lp_norm_is_a_norm(f in step(2, 16), g in step(2, 16), p in exponent(), s in -4.0f64..4.0) {
        let nf = lp_norm(&f, p, None).unwrap();
        let ng = lp_norm(&g, p, None).unwrap();
        prop_assert!((lp_norm(&f.scaled(s), p, None).unwrap() - s.abs() * nf).abs() <= 1e-10 * (1.0 + nf));
        prop_assert!(lp_norm(&f.add(&g).unwrap(), p, None).unwrap() <= nf + ng + 1e-10);
    }

    #[test]
    fn ac_norm_is_a_norm(a in curve(2, 12), c in curve(2, 12), p in exponent(), s in -4.0f64..4.0) {
        let na = ac_norm(&a, p);
        let scaled = a.map_samples(|x| x.iter().map(|v| s * v).collect()).unwrap();
        prop_assert!((ac_norm(&scaled, p) - s.abs() * na).abs() <= 1e-10 * (1.0 + na));
        let sum = SampledCurve::new(2, a.as_slice().iter().zip(c.as_slice()).map(|(x, y)| x + y).collect()).unwrap();
        prop_assert!(ac_norm(&sum, p) <= na + ac_norm(&c, p) + 1e-10);
    }

    #[test]
    fn two_norm_agrees_with_inner_product(f in step(3, 20)) {
        let n = lp_norm(&f, PExponent::TWO, None).unwrap();
        prop_assert!((n * n - l2_inner(&f, &f).unwrap()).abs() <= 1e-10 * (1.0 + n * n));
    }

    #[test]
    fn scaling_round_trips_and_norm_identity(f in step(3, 64)) {
        let q = scale(&f);
        for (x, y) in unscale(&q).as_slice().iter().zip(f.as_slice()) {
            prop_assert!((x - y).abs() <= 1e-10 * y.abs().max(1e-300));
        }
        for (x, y) in scale(&unscale(&f)).as_slice().iter().zip(f.as_slice()) {
            prop_assert!((x - y).abs() <= 1e-10 * y.abs().max(1e-300));
        }
        let l2 = lp_norm(&q, PExponent::TWO, None).unwrap();
        let l1 = lp_norm(&f, PExponent::ONE, None).unwrap();
        prop_assert!((l2 * l2 - l1).abs() <= 1e-12 * (1.0 + l1));
    }

    #[test]
    fn scaling_homogeneity_and_equivariance(f in step(3, 16), lambda in 0.01f64..50.0, axis in prop::array::uniform3(-1.0f64..1.0), angle in 0.0f64..6.3) {
        for (x, y) in scale(&f.scaled(lambda)).as_slice().iter().zip(scale(&f).scaled(lambda.sqrt()).as_slice()) {
            prop_assert!((x - y).abs() <= 1e-12 * (1.0 + y.abs()));
        }
        let o = Rotation3::new(Vector3::from(axis) * angle).into_inner();
        let turn = |g: &StepFunction| g.map_values(|v| (o * Vector3::from_column_slice(v)).as_slice().to_vec()).unwrap();
        for (x, y) in scale(&turn(&f)).as_slice().iter().zip(turn(&scale(&f)).as_slice()) {
            prop_assert!((x - y).abs() <= 1e-12 * (1.0 + y.abs()));
        }
    }

    #[test]
    fn srvt_round_trip(c in curve(3, 256)) {
        let back = euclidean::srvt_inverse(&euclidean::srvt(&c), c.start()).unwrap();
        for (x, y) in back.as_slice().iter().zip(c.as_slice()) {
            prop_assert!((x - y).abs() <= 1e-9);
        }
    }

    #[test]
    fn distance_is_a_pseudo_metric(a in curve(2, 32), b in curve(2, 32), c in curve(2, 32)) {
        let d = |x: &SampledCurve, y: &SampledCurve| euclidean::distance(x, y).unwrap();
        prop_assert_eq!(d(&a, &a), 0.0);
        prop_assert!((d(&a, &b) - d(&b, &a)).abs() <= 1e-12);
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-10);
        let based = |x: &SampledCurve, y: &SampledCurve| euclidean::distance_with_basepoint(x, y).unwrap();
        prop_assert!(based(&a, &c) <= based(&a, &b) + based(&b, &c) + 1e-10);
    }

    #[test]
    fn translation_and_rotation_invariance(a in curve(3, 32), c in curve(3, 32), shift in prop::array::uniform3(-3.0f64..3.0), axis in prop::array::uniform3(-1.0f64..1.0), angle in 0.0f64..6.3) {
        let d = euclidean::distance(&a, &c).unwrap();
        let moved = euclidean::distance(&a.translate(&shift).unwrap(), &c.translate(&shift).unwrap()).unwrap();
        prop_assert!((moved - d).abs() <= 1e-12 * (1.0 + d));
        let o = Rotation3::new(Vector3::from(axis) * angle).into_inner();
        let turned = euclidean::distance(&rotate(&a, &o), &rotate(&c, &o)).unwrap();
        prop_assert!((turned - d).abs() <= 1e-10 * (1.0 + d));
    }
}

#[test]
fn geodesic_midpoint_of_based_curves() {
    let a = BasedCurve::from_unbased(&SampledCurve::from_fn(128, 2, |t| vec![t.cos(), (3.0 * t).sin()]).unwrap()).unwrap();
    let c = BasedCurve::from_unbased(&SampledCurve::from_fn(128, 2, |t| vec![t * t, -t]).unwrap()).unwrap();
    let path = euclidean::geodesic(a.curve(), c.curve(), 2).unwrap();
    let d = euclidean::distance(a.curve(), c.curve()).unwrap();
    assert_abs_diff_eq!(euclidean::distance(a.curve(), &path[1]).unwrap(), d / 2.0, epsilon = 1e-9);
    assert_abs_diff_eq!(euclidean::distance(&path[1], c.curve()).unwrap(), d / 2.0, epsilon = 1e-9);
    assert!(path[1].start().iter().all(|x| x.abs() <= 1e-12));
}
