//! Convex bodies through their support functions: supporting slabs, widths,
//! membership and chords.

mod body;
mod hull;
mod primitives;
mod reuleaux;
mod sampled;

pub use body::{BodyKind, ConvexBody, TANGENT_TOLERANCE};
pub use primitives::{Chord, Direction, Hyperplane, Line, Slab, Vector, LINE_TOLERANCE, UNIT_TOLERANCE};
pub use reuleaux::Reuleaux;
pub use sampled::SampledSupport;

#[cfg(test)]
mod tests {
    use std::f64::consts::{PI, TAU};

    use proptest::prelude::*;

    use super::*;
    use crate::error::Error;

    fn unit_ball() -> ConvexBody {
        ConvexBody::ball(Vector::xy(0.0, 0.0), 1.0).unwrap()
    }

    fn shifted_ball() -> ConvexBody {
        ConvexBody::ball(Vector::xy(0.3, -0.2), 1.0).unwrap()
    }

    fn ellipse() -> ConvexBody {
        ConvexBody::ellipsoid(Vector::xy(0.0, 0.0), Vector::xy(1.5, 1.0)).unwrap()
    }

    /// Independent construction of a Reuleaux triangle boundary: three arcs of
    /// radius w about the vertices of an equilateral triangle of side w.
    fn reuleaux_hull_sample(width: f64, per_arc: usize) -> Vec<[f64; 2]> {
        let side_half = width / 2.0;
        let height = width * 3f64.sqrt() / 2.0;
        // Triangle with base on y = 0, apex up, then shifted so the centroid is the origin.
        let raw = [[-side_half, 0.0], [side_half, 0.0], [0.0, height]];
        let cy = height / 3.0;
        let v: Vec<[f64; 2]> = raw.iter().map(|p| [p[0], p[1] - cy]).collect();
        let mut out = Vec::new();
        for k in 0..3 {
            let a = v[(k + 1) % 3];
            let b = v[(k + 2) % 3];
            let start = (a[1] - v[k][1]).atan2(a[0] - v[k][0]);
            let mut end = (b[1] - v[k][1]).atan2(b[0] - v[k][0]);
            if end < start {
                end += TAU;
            }
            let (lo, hi) = if end - start > PI { (end, start + TAU) } else { (start, end) };
            for j in 0..per_arc {
                let t = lo + (hi - lo) * j as f64 / (per_arc - 1) as f64;
                out.push([v[k][0] + width * t.cos(), v[k][1] + width * t.sin()]);
            }
        }
        out
    }

    fn hull_support(sample: &[[f64; 2]], theta: f64) -> f64 {
        let (c, s) = (theta.cos(), theta.sin());
        sample.iter().map(|p| p[0] * c + p[1] * s).fold(f64::NEG_INFINITY, f64::max)
    }

    #[test]
    fn support_examples() {
        let x = Direction::from_angle(0.0);
        assert_eq!(unit_ball().support(&x).unwrap(), 1.0);
        assert!((shifted_ball().support(&x).unwrap() - 1.3).abs() < 1e-15);
        assert_eq!(ellipse().support(&x).unwrap(), 1.5);
        for theta in [0.3f64, 1.1, 2.9, -2.0] {
            let expected = (2.25 * theta.cos().powi(2) + theta.sin().powi(2)).sqrt();
            assert!((ellipse().support(&Direction::from_angle(theta)).unwrap() - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn support_rejects_dimension_mismatch() {
        let d = Direction::from_slice(&[0.0, 0.0, 1.0]).unwrap();
        assert!(matches!(unit_ball().support(&d), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn slab_examples() {
        let s = unit_ball().slab(&Direction::from_angle(0.7)).unwrap();
        assert_eq!((s.r1, s.r2), (-1.0, 1.0));
        let s = shifted_ball().slab(&Direction::from_slice(&[0.0, 1.0]).unwrap()).unwrap();
        assert!((s.r1 + 1.2).abs() < 1e-15 && (s.r2 - 0.8).abs() < 1e-15);
    }

    #[test]
    fn width_examples() {
        let e = ellipse();
        assert_eq!(e.width(&Direction::from_angle(0.0)).unwrap(), 3.0);
        assert!((e.width(&Direction::from_slice(&[0.0, 1.0]).unwrap()).unwrap() - 2.0).abs() < 1e-15);
        let b = ConvexBody::ball(Vector::xy(5.0, -3.0), 0.25).unwrap();
        for k in 0..16 {
            assert!((b.width(&Direction::from_angle(0.4 * k as f64)).unwrap() - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn reuleaux_support_matches_hull_oracle() {
        let sample = reuleaux_hull_sample(1.0, 200_001);
        let body = ConvexBody::reuleaux(Vector::xy(0.0, 0.0), 1.0, 0.0).unwrap();
        let mut worst: f64 = 0.0;
        for k in 0..360 {
            let theta = TAU * k as f64 / 360.0 + 0.001;
            let xi = Direction::from_angle(theta);
            let h = body.support(&xi).unwrap();
            worst = worst.max((h - hull_support(&sample, theta)).abs());
            let slab = body.slab(&xi).unwrap();
            assert!((slab.width() - 1.0).abs() < 1e-8);
            assert!((slab.r1 + hull_support(&sample, theta + PI)).abs() < 1e-8);
        }
        assert!(worst < 1e-8, "worst support error {worst}");
    }

    #[test]
    fn reuleaux_width_is_constant() {
        for orientation in [0.0, 0.4, 2.0] {
            let body = ConvexBody::reuleaux(Vector::xy(0.2, 0.1), 1.7, orientation).unwrap();
            for k in 0..1000 {
                let w = body.width(&Direction::from_angle(TAU * k as f64 / 1000.0)).unwrap();
                assert!((w - 1.7).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn contains_examples() {
        assert!(unit_ball().contains(&Vector::xy(0.5, 0.0)).unwrap());
        assert!(!unit_ball().contains(&Vector::xy(1.0001, 0.0)).unwrap());
        assert!(ellipse().contains(&Vector::xy(1.4, 0.3)).unwrap());
        assert!(!ellipse().contains(&Vector::xy(1.4, 0.4)).unwrap());
        let r = ConvexBody::reuleaux(Vector::xy(0.0, 0.0), 1.0, 0.0).unwrap();
        assert!(r.contains(&Vector::xy(0.0, 0.0)).unwrap());
        // The apex vertex sits at distance w/√3 on +y.
        assert!(r.contains(&Vector::xy(0.0, 1.0 / 3f64.sqrt() - 1e-9)).unwrap());
        assert!(!r.contains(&Vector::xy(0.0, 1.0 / 3f64.sqrt() + 1e-9)).unwrap());
    }

    #[test]
    fn chord_examples() {
        let x = Direction::from_angle(0.0);
        let c = unit_ball().chord(&Line::new(Vector::xy(0.0, 0.0), x).unwrap()).unwrap().unwrap();
        assert_eq!((c.t_in, c.t_out), (-1.0, 1.0));
        let c = unit_ball().chord(&Line::new(Vector::xy(0.0, 0.6), x).unwrap()).unwrap().unwrap();
        assert!((c.t_in + 0.8).abs() < 1e-15 && (c.t_out - 0.8).abs() < 1e-15);
        assert!(unit_ball().chord(&Line::new(Vector::xy(0.0, 1.5), x).unwrap()).unwrap().is_none());
        // Tangent line.
        assert!(unit_ball().chord(&Line::new(Vector::xy(0.0, 1.0), x).unwrap()).unwrap().is_none());
    }

    #[test]
    fn ellipsoid_section_center_is_inside_and_central() {
        let body = ConvexBody::ellipsoid(Vector::xyz(0.1, 0.0, -0.2), Vector::xyz(1.2, 1.0, 0.7)).unwrap();
        let normal = Direction::normalize(Vector::xyz(0.3, 0.5, 0.8)).unwrap();
        let plane = Hyperplane::new(normal, 0.4);
        let c = body.section_center(&plane).unwrap().unwrap();
        assert!((normal.dot(&c) - 0.4).abs() < 1e-14);
        assert!(body.contains(&c).unwrap());
        // Chords through the center along in-plane directions are bisected by it.
        let (a, b) = normal.orthonormal_complement();
        for dir in [a, b] {
            let line = Line::through(&c, dir).unwrap();
            let chord = body.chord(&line).unwrap().unwrap();
            assert!((chord.mid() - dir.dot(&c)).abs() < 1e-12);
        }
        assert!(body.section_center(&Hyperplane::new(normal, 5.0)).unwrap().is_none());
    }

    #[test]
    fn sampled_planar_body_reproduces_ellipse() {
        let n = 256;
        let dirs: Vec<Direction> = (0..n).map(|k| Direction::from_angle(TAU * k as f64 / n as f64)).collect();
        let h: Vec<f64> = dirs.iter().map(|d| ellipse().support(d).unwrap()).collect();
        let body = ConvexBody::support_sampled(dirs, h).unwrap();
        for k in 0..97 {
            let xi = Direction::from_angle(0.123 + TAU * k as f64 / 97.0);
            assert!((body.support(&xi).unwrap() - ellipse().support(&xi).unwrap()).abs() < 1e-6);
        }
        assert!(body.contains(&Vector::xy(1.4, 0.3)).unwrap());
        assert!(!body.contains(&Vector::xy(1.6, 0.0)).unwrap());
        let line = Line::new(Vector::xy(0.0, 0.0), Direction::from_angle(0.0)).unwrap();
        let c = body.chord(&line).unwrap().unwrap();
        assert!((c.t_out - 1.5).abs() < 1e-9 && (c.t_in + 1.5).abs() < 1e-9);
    }

    #[test]
    fn sampled_planar_body_rejects_nonconvex_and_irregular_tables() {
        let n = 32;
        let dirs: Vec<Direction> = (0..n).map(|k| Direction::from_angle(TAU * k as f64 / n as f64)).collect();
        let mut h = vec![1.0; n];
        h[5] = 0.5;
        assert!(matches!(ConvexBody::support_sampled(dirs.clone(), h), Err(Error::InvalidBody(_))));
        let mut skewed = dirs.clone();
        skewed[3] = Direction::from_angle(0.61);
        assert!(ConvexBody::support_sampled(skewed, vec![1.0; n]).is_err());
        assert!(ConvexBody::support_sampled(dirs.clone(), vec![-1.0; n]).is_err());
        assert!(ConvexBody::support_sampled(dirs, vec![1.0; n - 1]).is_err());
    }

    #[test]
    fn sampled_spatial_body_approximates_ball() {
        let n = 400;
        let golden = PI * (3.0 - 5f64.sqrt());
        let dirs: Vec<Direction> = (0..n)
            .map(|k| {
                let z = 1.0 - (2 * k + 1) as f64 / n as f64;
                Direction::from_spherical(z.acos(), golden * k as f64)
            })
            .collect();
        let center = Vector::xyz(0.2, -0.1, 0.3);
        let h: Vec<f64> = dirs.iter().map(|d| d.dot(&center) + 0.8).collect();
        let body = ConvexBody::support_sampled(dirs, h).unwrap();
        assert_eq!(body.dimension(), 3);
        for k in 0..50 {
            let xi = Direction::from_spherical(0.1 + 0.06 * k as f64, 0.7 * k as f64);
            let h = body.support(&xi).unwrap();
            // Barycentric interpolation of a linear-plus-constant h is exact up to the
            // spherical-to-flat distortion of each triangle.
            assert!((h - (xi.dot(&center) + 0.8)).abs() < 1e-2, "k = {k} h = {h} vs {}", xi.dot(&center) + 0.8);
            assert!(h >= xi.dot(&center) + 0.8 - 1e-12);
        }
        let plane = Hyperplane::new(Direction::from_slice(&[0.0, 0.0, 1.0]).unwrap(), 0.5);
        let c = body.section_center(&plane).unwrap().unwrap();
        assert!(body.contains(&c).unwrap());
        assert!((c[0] - 0.2).abs() < 1e-2 && (c[1] + 0.1).abs() < 1e-2);
    }

    fn arb_body() -> impl Strategy<Value = ConvexBody> {
        prop_oneof![
            (-1.0..1.0f64, -1.0..1.0f64, 0.1..2.0f64)
                .prop_map(|(x, y, r)| ConvexBody::ball(Vector::xy(x, y), r).unwrap()),
            (-1.0..1.0f64, -1.0..1.0f64, 0.1..2.0f64, 0.1..2.0f64).prop_map(|(x, y, a, b)| ConvexBody::ellipsoid(
                Vector::xy(x, y),
                Vector::xy(a, b)
            )
            .unwrap()),
            (-1.0..1.0f64, -1.0..1.0f64, 0.1..2.0f64, 0.0..TAU).prop_map(|(x, y, w, o)| ConvexBody::reuleaux(
                Vector::xy(x, y),
                w,
                o
            )
            .unwrap()),
        ]
    }

    proptest! {
        #[test]
        fn support_is_sublinear(body in arb_body(), t1 in 0.0..TAU, t2 in 0.0..TAU, a in 0.0..3.0f64, b in 0.0..3.0f64) {
            let (d1, d2) = (Direction::from_angle(t1), Direction::from_angle(t2));
            let combo = d1.vector() * a + d2.vector() * b;
            prop_assume!(combo.norm() > 1e-6);
            let hd = body.support(&Direction::normalize(combo).unwrap()).unwrap() * combo.norm();
            let bound = a * body.support(&d1).unwrap() + b * body.support(&d2).unwrap();
            prop_assert!(hd <= bound + 1e-12 * (1.0 + bound.abs()));
        }

        #[test]
        fn translation_shifts_support(body in arb_body(), t in 0.0..TAU, vx in -2.0..2.0f64, vy in -2.0..2.0f64) {
            let v = Vector::xy(vx, vy);
            let moved = body.translated(&v).unwrap();
            let xi = Direction::from_angle(t);
            let (s, sm) = (body.slab(&xi).unwrap(), moved.slab(&xi).unwrap());
            let shift = xi.dot(&v);
            prop_assert!((sm.r2 - s.r2 - shift).abs() < 1e-12);
            prop_assert!((sm.r1 - s.r1 - shift).abs() < 1e-12);
            prop_assert!((sm.width() - s.width()).abs() < 1e-12);
        }

        #[test]
        fn chord_endpoints_lie_on_boundary(body in arb_body(), t in 0.0..TAU, frac in 0.01..0.99f64) {
            let xi = Direction::from_angle(t);
            let slab = body.slab(&xi).unwrap();
            // Lines orthogonal to ξ at offsets strictly inside the slab hit the body.
            let s = slab.r1 + frac * slab.width();
            let line = Line::new(xi.vector() * s, xi.perp()).unwrap();
            let chord = body.chord(&line).unwrap();
            prop_assert!(chord.is_some());
            let c = chord.unwrap();
            let eps = 1e-10 * body.diameter();
            prop_assert!(body.contains(&line.at(c.t_in + eps)).unwrap());
            prop_assert!(!body.contains(&line.at(c.t_in - eps)).unwrap());
            prop_assert!(body.contains(&line.at(c.t_out - eps)).unwrap());
            prop_assert!(!body.contains(&line.at(c.t_out + eps)).unwrap());
        }

        #[test]
        fn support_point_attains_support(body in arb_body(), t in 0.0..TAU) {
            let xi = Direction::from_angle(t);
            let p = body.support_point(&xi).unwrap();
            prop_assert!((xi.dot(&p) - body.support(&xi).unwrap()).abs() < 1e-12);
        }
    }
}
