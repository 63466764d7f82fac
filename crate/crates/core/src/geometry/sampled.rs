//! Bodies known only through a table of support values h(ξᵢ).
//!
//! Planar tables live on a uniform angular grid and are interpolated with a
//! periodic cubic Hermite spline. Spatial tables are triangulated on the sphere
//! and interpolated barycentrically in the positively homogeneous extension of h,
//! which is the support function of the circumscribed polytope.
//! Membership and chords use the finite half-space system ⟨x, ξᵢ⟩ ≤ h(ξᵢ).

use std::f64::consts::TAU;

use super::hull::sphere_triangulation;
use super::primitives::{Chord, Direction, Line, Vector};
use crate::error::{Error, Result};

const GRID_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct SampledSupport {
    dim: usize,
    directions: Vec<Direction>,
    values: Vec<f64>,
    interp: Interpolant,
    diam: f64,
}

#[derive(Clone, Debug, PartialEq)]
enum Interpolant {
    /// Uniform grid starting at `theta0`; `directions`/`values` are sorted by angle.
    Periodic {
        theta0: f64,
        step: f64,
    },
    Triangulated {
        faces: Vec<[usize; 3]>,
        inverses: Vec<[[f64; 3]; 3]>,
    },
}

impl SampledSupport {
    pub(crate) fn new(directions: Vec<Direction>, values: Vec<f64>) -> Result<Self> {
        if directions.len() != values.len() {
            return Err(Error::InvalidBody(format!(
                "{} directions but {} support values",
                directions.len(),
                values.len()
            )));
        }
        if values.iter().any(|h| !h.is_finite()) {
            return Err(Error::InvalidBody("support values must be finite".into()));
        }
        let dim =
            directions.first().map(|d| d.dim()).ok_or_else(|| Error::InvalidBody("empty support table".into()))?;
        if let Some(d) = directions.iter().find(|d| d.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: d.dim() });
        }
        let mut body = match dim {
            2 => Self::planar(directions, values)?,
            3 => Self::spatial(directions, values)?,
            d => return Err(Error::UnsupportedDimension(d)),
        };
        body.check_interior()?;
        body.diam = body.directions.iter().map(|d| body.support(d) + body.support(&-*d)).fold(0.0, f64::max);
        Ok(body)
    }

    fn planar(directions: Vec<Direction>, values: Vec<f64>) -> Result<Self> {
        let n = directions.len();
        if n < 8 {
            return Err(Error::InvalidBody(format!("planar support table needs at least 8 directions, got {n}")));
        }
        let mut rows: Vec<(f64, Direction, f64)> =
            directions.into_iter().zip(values).map(|(d, h)| (d.angle().rem_euclid(TAU), d, h)).collect();
        rows.sort_by(|a, b| a.0.total_cmp(&b.0));
        let step = TAU / n as f64;
        let theta0 = rows[0].0;
        for (k, row) in rows.iter().enumerate() {
            if (row.0 - theta0 - k as f64 * step).abs() > GRID_TOLERANCE {
                return Err(Error::InvalidBody("planar support directions must form a uniform angular grid".into()));
            }
        }
        let values: Vec<f64> = rows.iter().map(|r| r.2).collect();
        let scale = values.iter().fold(0.0f64, |m, h| m.max(h.abs()));
        for i in 0..n {
            let second = values[(i + 1) % n] - 2.0 * values[i] + values[(i + n - 1) % n];
            if values[i] + second / (step * step) < -1e-9 * scale {
                return Err(Error::InvalidBody(format!(
                    "support table violates h + h'' >= 0 at direction #{i} (not convex)"
                )));
            }
        }
        Ok(Self {
            dim: 2,
            directions: rows.iter().map(|r| r.1).collect(),
            values,
            interp: Interpolant::Periodic { theta0, step },
            diam: 0.0,
        })
    }

    fn spatial(directions: Vec<Direction>, values: Vec<f64>) -> Result<Self> {
        let points: Vec<Vector> = directions.iter().map(|d| d.vector()).collect();
        let faces = sphere_triangulation(&points)?;
        let inverses = faces
            .iter()
            .map(|f| invert_columns(&points[f[0]], &points[f[1]], &points[f[2]]))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { dim: 3, directions, values, interp: Interpolant::Triangulated { faces, inverses }, diam: 0.0 })
    }

    fn check_interior(&self) -> Result<()> {
        for d in &self.directions {
            let w = self.support(d) + self.support(&-*d);
            if !(w > 0.0) {
                return Err(Error::InvalidBody(format!("empty interior: width {w} along {d:?}")));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn directions(&self) -> &[Direction] {
        &self.directions
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn support(&self, xi: &Direction) -> f64 {
        match &self.interp {
            Interpolant::Periodic { theta0, step } => {
                let n = self.values.len();
                let u = ((xi.angle() - theta0) / step).rem_euclid(n as f64);
                let i = (u.floor() as usize).min(n - 1);
                let s = u - i as f64;
                let h = |k: usize| self.values[k % n];
                let (h0, h1) = (h(i), h(i + 1));
                let m0 = 0.5 * (h1 - h(i + n - 1));
                let m1 = 0.5 * (h(i + 2) - h0);
                let (s2, s3) = (s * s, s * s * s);
                (2.0 * s3 - 3.0 * s2 + 1.0) * h0
                    + (s3 - 2.0 * s2 + s) * m0
                    + (-2.0 * s3 + 3.0 * s2) * h1
                    + (s3 - s2) * m1
            }
            Interpolant::Triangulated { faces, inverses } => {
                let x = xi.vector();
                let mut best = (f64::NEG_INFINITY, 0.0);
                for (f, inv) in faces.iter().zip(inverses) {
                    let lam = apply(inv, &x);
                    let worst = lam[0].min(lam[1]).min(lam[2]);
                    if worst > best.0 {
                        let h = lam[0] * self.values[f[0]] + lam[1] * self.values[f[1]] + lam[2] * self.values[f[2]];
                        best = (worst, h);
                        if worst >= 0.0 {
                            break;
                        }
                    }
                }
                best.1
            }
        }
    }

    pub(crate) fn contains(&self, x: &Vector) -> bool {
        let scale = self.diameter();
        self.directions.iter().zip(&self.values).all(|(d, h)| d.dot(x) <= h + 1e-12 * scale)
    }

    pub(crate) fn chord(&self, line: &Line) -> Option<Chord> {
        let (mut t_in, mut t_out) = (f64::NEG_INFINITY, f64::INFINITY);
        let (p, u) = (line.point(), line.dir().vector());
        for (d, h) in self.directions.iter().zip(&self.values) {
            let a = d.dot(&u);
            let b = h - d.dot(&p);
            if a.abs() < 1e-15 {
                if b < 0.0 {
                    return None;
                }
            } else if a > 0.0 {
                t_out = t_out.min(b / a);
            } else {
                t_in = t_in.max(b / a);
            }
        }
        (t_out > t_in && t_in.is_finite() && t_out.is_finite()).then_some(Chord { t_in, t_out })
    }

    pub(crate) fn diameter(&self) -> f64 {
        self.diam
    }

    /// Gradient of the homogeneous extension |x|·h(x/|x|), by central differences.
    pub(crate) fn support_point(&self, xi: &Direction) -> Vector {
        let step = 1e-6;
        let x = xi.vector();
        let extended = |y: Vector| y.norm() * self.support(&Direction::normalize(y).expect("nonzero"));
        let mut g = [0.0; 3];
        for (j, gj) in g.iter_mut().enumerate().take(self.dim) {
            let e = Vector::axis(self.dim, j).expect("axis in range");
            *gj = (extended(x + e * step) - extended(x - e * step)) / (2.0 * step);
        }
        Vector::new(&g[..self.dim]).expect("finite gradient")
    }
}

fn invert_columns(a: &Vector, b: &Vector, c: &Vector) -> Result<[[f64; 3]; 3]> {
    let det = a.dot(&b.cross(c));
    if det.abs() < 1e-14 {
        return Err(Error::InvalidBody("degenerate direction triangle".into()));
    }
    // Rows of the inverse of [a b c] are the reciprocal basis.
    let r0 = b.cross(c) * (1.0 / det);
    let r1 = c.cross(a) * (1.0 / det);
    let r2 = a.cross(b) * (1.0 / det);
    Ok([[r0[0], r0[1], r0[2]], [r1[0], r1[1], r1[2]], [r2[0], r2[1], r2[2]]])
}

fn apply(m: &[[f64; 3]; 3], x: &Vector) -> [f64; 3] {
    let row = |r: &[f64; 3]| r[0] * x[0] + r[1] * x[1] + r[2] * x[2];
    [row(&m[0]), row(&m[1]), row(&m[2])]
}
