//! Incremental convex hull of points on the unit sphere.
//!
//! For unit vectors every point is extreme, so the hull facets are a
//! triangulation of the direction set (its spherical Delaunay triangulation).

use std::collections::HashSet;

use super::primitives::Vector;
use crate::error::{Error, Result};

const VISIBLE_EPS: f64 = 1e-12;

fn orient(points: &[Vector], f: [usize; 3], p: &Vector) -> f64 {
    let (a, b, c) = (points[f[0]], points[f[1]], points[f[2]]);
    (b - a).cross(&(c - a)).dot(&(*p - a))
}

/// Outward-oriented triangles covering the sphere.
pub(crate) fn sphere_triangulation(points: &[Vector]) -> Result<Vec<[usize; 3]>> {
    let n = points.len();
    if n < 4 {
        return Err(Error::InvalidBody(format!("need at least 4 directions, got {n}")));
    }

    let i0 = 0;
    let i1 =
        (1..n).max_by(|&a, &b| points[a].distance(&points[i0]).total_cmp(&points[b].distance(&points[i0]))).unwrap();
    let axis = points[i1] - points[i0];
    let off_line = |k: usize| axis.cross(&(points[k] - points[i0])).norm();
    let i2 = (0..n).max_by(|&a, &b| off_line(a).total_cmp(&off_line(b))).unwrap();
    let tri = [i0, i1, i2];
    let i3 = (0..n)
        .max_by(|&a, &b| orient(points, tri, &points[a]).abs().total_cmp(&orient(points, tri, &points[b]).abs()))
        .unwrap();
    if orient(points, tri, &points[i3]).abs() < 1e-9 {
        return Err(Error::InvalidBody("direction set is coplanar".into()));
    }

    let mut faces: Vec<[usize; 3]> = Vec::new();
    let base = [[i0, i1, i2], [i0, i1, i3], [i0, i2, i3], [i1, i2, i3]];
    for (k, f) in base.iter().enumerate() {
        let opposite = [i3, i2, i1, i0][k];
        let mut f = *f;
        if orient(points, f, &points[opposite]) > 0.0 {
            f.swap(1, 2);
        }
        faces.push(f);
    }

    let seeded = [i0, i1, i2, i3];
    for p in 0..n {
        if seeded.contains(&p) {
            continue;
        }
        let visible: Vec<bool> = faces.iter().map(|f| orient(points, *f, &points[p]) > VISIBLE_EPS).collect();
        if !visible.iter().any(|v| *v) {
            return Err(Error::InvalidBody(format!("direction #{p} is duplicated or not on the sphere")));
        }
        let mut edges = HashSet::new();
        for (f, _) in faces.iter().zip(&visible).filter(|(_, v)| **v) {
            for e in 0..3 {
                edges.insert((f[e], f[(e + 1) % 3]));
            }
        }
        let mut next: Vec<[usize; 3]> = faces.iter().zip(&visible).filter(|(_, v)| !**v).map(|(f, _)| *f).collect();
        for &(u, v) in &edges {
            if !edges.contains(&(v, u)) {
                next.push([u, v, p]);
            }
        }
        faces = next;
    }
    // Deterministic order independent of HashSet iteration.
    for f in faces.iter_mut() {
        let k = (0..3).min_by_key(|&k| f[k]).unwrap();
        f.rotate_left(k);
    }
    faces.sort_unstable();
    Ok(faces)
}
