use std::f64::consts::PI;

use proptest::prelude::*;

use super::*;
use crate::geometry::{Direction, Hyperplane, Line};
use crate::oracles::{self, GammaFamilySpec};

fn origin2() -> Vector {
    Vector::xy(0.0, 0.0)
}

fn origin3() -> Vector {
    Vector::xyz(0.0, 0.0, 0.0)
}

fn horizontal(y: f64) -> Line {
    Line::new(Vector::xy(0.0, y), Direction::from_angle(0.0)).unwrap()
}

/// Brute-force chord integral: composite Simpson on the raw integrand after
/// t = mid + half·sin θ, sampled densely. Independent of the Gauss rule.
fn simpson_chord(f: &TestFunction, line: &Line, steps: usize) -> f64 {
    let (c, r) = f.radial_ball().unwrap();
    let u = line.dir().vector();
    let mid = u.dot(&(c - line.point()));
    let dist = (line.at(mid) - c).norm();
    let half = (r * r - dist * dist).sqrt();
    let h = PI / steps as f64;
    let g = |theta: f64| {
        let x = line.at(mid + half * theta.sin());
        f.value(&x).unwrap() * half * theta.cos()
    };
    // Endpoints ±π/2 are skipped by using the open midpoint rule at the ends.
    let mut sum = 0.0;
    for k in 0..steps {
        sum += g(-PI / 2.0 + (k as f64 + 0.5) * h);
    }
    sum * h
}

#[test]
fn xray_examples() {
    let quad = Quadrature::default();
    let cx = TestFunction::constant_xray(origin2(), 1.0).unwrap();
    assert!((xray(&cx, &horizontal(0.6), &quad).unwrap() - 1.0).abs() < 1e-13);
    let ind = TestFunction::indicator(ConvexBody::ball(origin2(), 1.0).unwrap());
    assert!((xray(&ind, &horizontal(0.0), &quad).unwrap() - 2.0).abs() < 1e-14);
    assert_eq!(xray(&ind, &horizontal(1.5), &quad).unwrap(), 0.0);
    let half = TestFunction::gamma_family(origin2(), 1.0, -0.5).unwrap();
    for y in [0.0, 0.3, 0.9, 0.999] {
        assert!((xray(&half, &horizontal(y), &quad).unwrap() - PI).abs() < 1e-12);
    }
}

#[test]
fn radon_examples() {
    let quad = Quadrature::default();
    let z = Direction::from_slice(&[0.0, 0.0, 1.0]).unwrap();
    let ind = TestFunction::indicator(ConvexBody::ball(origin3(), 1.0).unwrap());
    let area = radon(&ind, &Hyperplane::new(z, 0.5), &quad).unwrap();
    assert!((area - 0.75 * PI).abs() < 1e-12, "{area}");
    let g1 = TestFunction::gamma_family(origin3(), 1.0, 1.0).unwrap();
    for d in [0.0, 0.3, 0.7] {
        let v = radon(&g1, &Hyperplane::new(z, d), &quad).unwrap();
        let expected = 0.5 * PI * (1.0 - d * d).powi(2);
        assert!((v - expected).abs() < 1e-13, "d={d}: {v}");
    }
    let disk = TestFunction::indicator(ConvexBody::ball(origin2(), 1.0).unwrap());
    let x = Direction::from_angle(0.0);
    assert!((radon(&disk, &Hyperplane::new(x, 0.8), &quad).unwrap() - 1.2).abs() < 1e-14);
}

#[test]
fn section_measure_examples() {
    let quad = Quadrature::default();
    let x2 = Direction::from_angle(0.0);
    let disk = ConvexBody::ball(origin2(), 1.0).unwrap();
    assert!((section_measure(&disk, &Hyperplane::new(x2, 0.0), &quad).unwrap() - 2.0).abs() < 1e-14);
    let ellipse = ConvexBody::ellipsoid(origin2(), Vector::xy(1.5, 1.0)).unwrap();
    assert!((section_measure(&ellipse, &Hyperplane::new(x2, 0.0), &quad).unwrap() - 2.0).abs() < 1e-14);
    let ball = ConvexBody::ball(origin3(), 1.0).unwrap();
    let n = Direction::normalize(Vector::xyz(1.0, 2.0, 2.0)).unwrap();
    assert!((section_measure(&ball, &Hyperplane::new(n, 0.5), &quad).unwrap() - 0.75 * PI).abs() < 1e-12);
    // Ellipse section of an ellipsoid: area π·a·b·(1 − d²/c²).
    let ell3 = ConvexBody::ellipsoid(origin3(), Vector::xyz(1.5, 1.0, 0.8)).unwrap();
    let z = Direction::from_slice(&[0.0, 0.0, 1.0]).unwrap();
    let area = section_measure(&ell3, &Hyperplane::new(z, 0.4), &quad).unwrap();
    let expected = PI * 1.5 * 1.0 * (1.0 - 0.25);
    assert!((area - expected).abs() < 1e-10, "{area} vs {expected}");
    assert!(section_measure(&ball, &Hyperplane::new(x2, 0.0), &quad).is_err());
}

#[test]
fn oracle_equivalence_over_the_gamma_grid() {
    let quad = Quadrature::default();
    for dim in [2usize, 3] {
        for gamma in [-0.5, 0.0, 1.0, 2.5] {
            let spec = GammaFamilySpec::new(1.0, gamma, dim).unwrap();
            let f = TestFunction::gamma_family(Vector::zeros(dim).unwrap(), 1.0, gamma).unwrap();
            let omega = if dim == 2 {
                Direction::from_angle(0.7)
            } else {
                Direction::normalize(Vector::xyz(0.2, -0.5, 0.8)).unwrap()
            };
            for d in [0.0, 0.25, 0.5, 0.75, 0.9, 0.95] {
                let numeric = radon(&f, &Hyperplane::new(omega, d), &quad).unwrap();
                let closed = oracles::radon_gamma(&spec, d).unwrap();
                assert!(((numeric - closed) / closed).abs() < 1e-6, "n={dim} γ={gamma} d={d}: {numeric} vs {closed}");
            }
        }
    }
}

#[test]
fn chord_integral_agrees_with_brute_force() {
    let quad = Quadrature::default();
    for gamma in [-0.5, -0.25, 0.5, 1.0] {
        let f = TestFunction::gamma_family(Vector::xy(0.2, 0.1), 1.3, gamma).unwrap();
        let line = Line::through(&Vector::xy(0.0, 0.5), Direction::from_angle(0.4)).unwrap();
        let fast = xray(&f, &line, &quad).unwrap();
        let slow = simpson_chord(&f, &line, 20000);
        let tol = if gamma < 0.0 { 1e-3 } else { 1e-8 };
        assert!(((fast - slow) / slow).abs() < tol, "γ={gamma}: {fast} vs {slow}");
    }
}

#[test]
fn doubling_nodes_reduces_error() {
    let spec = GammaFamilySpec::new(1.0, 1.0, 3).unwrap();
    let f = TestFunction::gamma_family(origin3(), 1.0, 1.0).unwrap();
    let z = Direction::from_slice(&[0.0, 0.0, 1.0]).unwrap();
    let err = |n: usize| {
        let q = Quadrature::new(n, 16).unwrap();
        let v = radon(&f, &Hyperplane::new(z, 0.5), &q).unwrap();
        (v - oracles::radon_gamma(&spec, 0.5).unwrap()).abs()
    };
    let (coarse, fine) = (err(2), err(4));
    assert!(coarse > 0.0 && fine * 4.0 <= coarse, "{coarse} -> {fine}");
}

#[test]
fn malformed_profile_is_a_numeric_error() {
    let table = RadialTable::new(vec![0.0, 0.5, 1.0], vec![1.0, f64::NAN, 1.0]).unwrap();
    let f = TestFunction::radial_profile(origin2(), table).unwrap();
    let err = xray(&f, &horizontal(0.1), &Quadrature::default()).unwrap_err();
    assert!(err.is_numeric(), "{err}");
    let dirs = direction_grid(2, 8, None).unwrap();
    let err = sinogram(&f, &dirs, &SinogramOptions { offsets: 16, ..Default::default() }).unwrap_err();
    assert!(matches!(err, Error::Sample { .. }) && err.is_numeric());
}

#[test]
fn dimension_mismatch_is_reported() {
    let f = TestFunction::constant_xray(origin2(), 1.0).unwrap();
    let z = Direction::from_slice(&[0.0, 0.0, 1.0]).unwrap();
    assert!(matches!(
        radon(&f, &Hyperplane::new(z, 0.0), &Quadrature::default()),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn sinogram_examples() {
    let cx = TestFunction::constant_xray(Vector::xy(0.3, -0.2), 1.0).unwrap();
    let dirs = direction_grid(2, 64, None).unwrap();
    let s = sinogram(&cx, &dirs, &SinogramOptions::default()).unwrap();
    s.validate().unwrap();
    assert_eq!(s.len(), 64 * 128);
    assert!(s.samples().all(|(_, _, v)| (v - 1.0).abs() < 1e-8));

    let ind = TestFunction::indicator(ConvexBody::ball(origin2(), 1.0).unwrap());
    let s = sinogram(&ind, &dirs[..8], &SinogramOptions { offsets: 32, ..Default::default() }).unwrap();
    for (_, p, v) in s.samples() {
        assert!((v - 2.0 * (1.0 - p * p).sqrt()).abs() < 1e-13);
    }

    let g0 = TestFunction::gamma_family(origin3(), 1.0, 0.0).unwrap();
    let dirs3 = direction_grid(3, 12, Some(3)).unwrap();
    let s = sinogram(&g0, &dirs3, &SinogramOptions { offsets: 16, ..Default::default() }).unwrap();
    for (_, p, v) in s.samples() {
        assert!((v - PI * (1.0 - p * p)).abs() < 1e-12);
    }
}

#[test]
fn sinogram_offsets_stay_inside_the_slab() {
    let body = ConvexBody::ellipsoid(Vector::xy(0.1, 0.0), Vector::xy(1.5, 1.0)).unwrap();
    let f = TestFunction::indicator(body.clone());
    let dirs = direction_grid(2, 16, Some(1)).unwrap();
    let s = sinogram(&f, &dirs, &SinogramOptions { offsets: 64, ..Default::default() }).unwrap();
    for (d, p) in s.directions.iter().zip(&s.offsets) {
        let slab = body.slab(d).unwrap();
        let eps = 1e-6 * slab.width();
        assert!(p.iter().all(|p| *p > slab.r1 + eps && *p < slab.r2 - eps));
        assert!(p.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn sinogram_rejects_bad_grids() {
    let f = TestFunction::constant_xray(origin3(), 1.0).unwrap();
    let dirs = direction_grid(3, 8, None).unwrap();
    let few = SinogramOptions { offsets: 8, ..Default::default() };
    assert!(matches!(sinogram(&f, &dirs, &few), Err(Error::InsufficientSamples { .. })));
    let xray3 = SinogramOptions { transform: TransformKind::Xray, ..Default::default() };
    assert!(sinogram(&f, &dirs, &xray3).is_err());
    assert!(direction_grid(3, 5, None).is_err());
    assert!(direction_grid(4, 50, None).is_err());
}

#[test]
fn direction_grids_are_unit_and_seeded_deterministically() {
    for dim in [2, 3] {
        let a = direction_grid(dim, 50, Some(9)).unwrap();
        let b = direction_grid(dim, 50, Some(9)).unwrap();
        let c = direction_grid(dim, 50, Some(10)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.iter().all(|d| (d.vector().norm() - 1.0).abs() < 1e-14));
    }
}

#[test]
fn synthetic_sinogram_is_a_function_of_distance() {
    let body = ConvexBody::reuleaux(origin2(), 1.0, 0.0).unwrap();
    let dirs = direction_grid(2, 16, None).unwrap();
    let s = synthetic_sinogram(&body, &dirs, 32, |t| 1.0 + t).unwrap();
    let slabs = s.meta.slabs.as_ref().unwrap();
    for (i, p, v) in s.samples() {
        let sl = &slabs[i];
        assert_eq!(v, 1.0 + (p - sl.r1).min(sl.r2 - p));
    }
    assert!(synthetic_sinogram(&body, &dirs, 32, |_| f64::NAN).is_err());
}

#[test]
fn parity_on_opposite_directions() {
    let f = TestFunction::gamma_family(Vector::xy(0.25, -0.1), 0.9, 0.5).unwrap();
    let quad = Quadrature::default();
    for k in 0..12 {
        let omega = Direction::from_angle(0.37 * k as f64);
        for p in [-0.5, 0.0, 0.2, 0.7] {
            let a = radon(&f, &Hyperplane::new(omega, p), &quad).unwrap();
            let b = radon(&f, &Hyperplane::new(-omega, -p), &quad).unwrap();
            assert!((a - b).abs() < 1e-14 * a.abs().max(1.0), "{a} vs {b}");
        }
    }
}

#[test]
fn radial_functions_are_rotation_invariant() {
    let f = TestFunction::gamma_family(origin3(), 1.0, 2.5).unwrap();
    let dirs = direction_grid(3, 40, Some(2)).unwrap();
    let quad = Quadrature::default();
    for p in [0.0, 0.3, 0.8] {
        let vals: Vec<f64> = dirs.iter().map(|d| radon(&f, &Hyperplane::new(*d, p), &quad).unwrap()).collect();
        let spread = vals.iter().cloned().fold(f64::MIN, f64::max) - vals.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread < 1e-8, "p={p}: spread {spread}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn translation_shifts_the_offset_axis(
        vx in -2.0..2.0f64, vy in -2.0..2.0f64, theta in 0.0..std::f64::consts::TAU,
        p in -0.95..0.95f64, gamma in prop::sample::select(vec![-0.5, 0.0, 1.0, 2.5]),
    ) {
        let v = Vector::xy(vx, vy);
        let f = TestFunction::gamma_family(origin2(), 1.0, gamma).unwrap();
        let g = f.translated(&v).unwrap();
        let omega = Direction::from_angle(theta);
        let quad = Quadrature::default();
        let a = radon(&f, &Hyperplane::new(omega, p), &quad).unwrap();
        let b = radon(&g, &Hyperplane::new(omega, p + omega.dot(&v)), &quad).unwrap();
        prop_assert!((a - b).abs() < 1e-10 * a.abs().max(1.0));
    }

    #[test]
    fn indicator_sections_of_translated_ellipsoids(
        vx in -1.0..1.0f64, vy in -1.0..1.0f64, vz in -1.0..1.0f64,
        polar in 0.1..3.0f64, azimuth in 0.0..6.2f64, s in -0.9..0.9f64,
    ) {
        let body = ConvexBody::ellipsoid(origin3(), Vector::xyz(1.2, 1.0, 0.7)).unwrap();
        let v = Vector::xyz(vx, vy, vz);
        let moved = body.translated(&v).unwrap();
        let omega = Direction::from_spherical(polar, azimuth);
        let slab = body.slab(&omega).unwrap();
        let p = slab.mid() + s * 0.5 * slab.width();
        let quad = Quadrature::default();
        let a = section_measure(&body, &Hyperplane::new(omega, p), &quad).unwrap();
        let b = section_measure(&moved, &Hyperplane::new(omega, p + omega.dot(&v)), &quad).unwrap();
        prop_assert!(a > 0.0);
        prop_assert!((a - b).abs() < 1e-9 * a, "{} vs {}", a, b);
    }

    #[test]
    fn scaling_is_linear(lambda in 0.1..10.0f64, p in -0.9..0.9f64) {
        let f = TestFunction::constant_xray(origin2(), 1.0).unwrap();
        let g = f.scaled(lambda).unwrap();
        let plane = Hyperplane::new(Direction::from_angle(1.0), p);
        let quad = Quadrature::default();
        let a = radon(&f, &plane, &quad).unwrap();
        let b = radon(&g, &plane, &quad).unwrap();
        prop_assert!((b - lambda * a).abs() < 1e-13 * b);
    }
}
