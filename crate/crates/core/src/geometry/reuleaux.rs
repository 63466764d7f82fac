//! The Reuleaux triangle: intersection of three disks of radius `w` centered at the
//! vertices of an equilateral triangle of side `w`.
//!
//! Its boundary is three circular arcs. The arc centered at vertex `V_k` joins the
//! other two vertices and its outward normals fill the 60° cone around `c − V_k`;
//! the remaining normals (the cones opposite each arc) belong to the vertices.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_6, PI};

use super::primitives::{Chord, Direction, Line, Vector};

#[derive(Clone, Debug, PartialEq)]
pub struct Reuleaux {
    pub(crate) center: Vector,
    pub(crate) width: f64,
    pub(crate) orientation: f64,
    vertices: [Vector; 3],
    /// Unit vectors from each vertex toward the centroid; axis of that vertex's arc cone.
    arc_axes: [Vector; 3],
}

impl Reuleaux {
    pub(crate) fn new(center: Vector, width: f64, orientation: f64) -> Self {
        let circumradius = width / 3f64.sqrt();
        let mut vertices = [center; 3];
        let mut arc_axes = [center; 3];
        for k in 0..3 {
            let a = orientation + FRAC_PI_2 + 2.0 * PI * k as f64 / 3.0;
            let u = Vector::xy(a.cos(), a.sin());
            vertices[k] = center + u * circumradius;
            arc_axes[k] = -u;
        }
        Self { center, width, orientation, vertices, arc_axes }
    }

    pub fn vertices(&self) -> &[Vector; 3] {
        &self.vertices
    }

    fn in_arc_cone(&self, k: usize, xi: &Direction) -> bool {
        xi.dot(&self.arc_axes[k]) >= FRAC_PI_6.cos() - 1e-15
    }

    pub(crate) fn support(&self, xi: &Direction) -> f64 {
        let mut h = f64::NEG_INFINITY;
        for k in 0..3 {
            let at_vertex = xi.dot(&self.vertices[k]);
            h = h.max(at_vertex);
            if self.in_arc_cone(k, xi) {
                h = h.max(at_vertex + self.width);
            }
        }
        h
    }

    pub(crate) fn support_point(&self, xi: &Direction) -> Vector {
        if let Some(k) = (0..3).find(|&k| self.in_arc_cone(k, xi)) {
            return self.vertices[k] + xi.vector() * self.width;
        }
        let mut best = self.vertices[0];
        for v in &self.vertices[1..] {
            if xi.dot(v) > xi.dot(&best) {
                best = *v;
            }
        }
        best
    }

    pub(crate) fn contains(&self, x: &Vector) -> bool {
        let w2 = self.width * self.width;
        self.vertices.iter().all(|v| (*x - *v).norm_sq() <= w2)
    }

    pub(crate) fn chord(&self, line: &Line) -> Option<Chord> {
        let mut t_in = f64::NEG_INFINITY;
        let mut t_out = f64::INFINITY;
        for v in &self.vertices {
            let c = super::body::ball_chord(v, self.width, line)?;
            t_in = t_in.max(c.t_in);
            t_out = t_out.min(c.t_out);
        }
        (t_out > t_in).then_some(Chord { t_in, t_out })
    }
}
