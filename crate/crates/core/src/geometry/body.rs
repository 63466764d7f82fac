use super::primitives::{Chord, Direction, Hyperplane, Line, Slab, Vector};
use super::reuleaux::Reuleaux;
use super::sampled::SampledSupport;
use crate::error::{Error, Result};

/// Chords shorter than this fraction of the body diameter are treated as tangent.
pub const TANGENT_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub enum BodyKind {
    Ball {
        center: Vector,
        radius: f64,
    },
    /// Axis-aligned ellipsoid with the given semi-axes.
    Ellipsoid {
        center: Vector,
        semi_axes: Vector,
    },
    Reuleaux(Reuleaux),
    SupportSampled(SampledSupport),
}

/// A bounded convex body in R² or R³, described through its support function.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexBody {
    kind: BodyKind,
}

impl ConvexBody {
    pub fn ball(center: Vector, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidBody(format!("ball radius must be positive, got {radius}")));
        }
        Ok(Self { kind: BodyKind::Ball { center, radius } })
    }

    pub fn ellipsoid(center: Vector, semi_axes: Vector) -> Result<Self> {
        semi_axes.check_dim(center.dim())?;
        if semi_axes.as_slice().iter().any(|a| !(*a > 0.0)) {
            return Err(Error::InvalidBody(format!("semi-axes must be positive, got {semi_axes:?}")));
        }
        Ok(Self { kind: BodyKind::Ellipsoid { center, semi_axes } })
    }

    /// Reuleaux triangle of constant width `width` centered at its centroid.
    /// At orientation 0 one vertex points along +y.
    pub fn reuleaux(center: Vector, width: f64, orientation: f64) -> Result<Self> {
        center.check_dim(2)?;
        if !(width > 0.0 && width.is_finite()) || !orientation.is_finite() {
            return Err(Error::InvalidBody(format!("invalid Reuleaux width {width} / orientation {orientation}")));
        }
        Ok(Self { kind: BodyKind::Reuleaux(Reuleaux::new(center, width, orientation)) })
    }

    pub fn support_sampled(directions: Vec<Direction>, values: Vec<f64>) -> Result<Self> {
        Ok(Self { kind: BodyKind::SupportSampled(SampledSupport::new(directions, values)?) })
    }

    pub fn kind(&self) -> &BodyKind {
        &self.kind
    }

    pub fn dimension(&self) -> usize {
        match &self.kind {
            BodyKind::Ball { center, .. } | BodyKind::Ellipsoid { center, .. } => center.dim(),
            BodyKind::Reuleaux(_) => 2,
            BodyKind::SupportSampled(s) => s.dim(),
        }
    }

    fn check(&self, dim: usize) -> Result<()> {
        let own = self.dimension();
        if own != dim {
            return Err(Error::DimensionMismatch { expected: own, found: dim });
        }
        Ok(())
    }

    /// h(ξ) = sup over the body of ⟨x, ξ⟩.
    pub fn support(&self, xi: &Direction) -> Result<f64> {
        self.check(xi.dim())?;
        Ok(match &self.kind {
            BodyKind::Ball { center, radius } => xi.dot(center) + radius,
            BodyKind::Ellipsoid { center, semi_axes } => {
                let q: f64 = (0..center.dim()).map(|i| (semi_axes[i] * xi.as_slice()[i]).powi(2)).sum();
                xi.dot(center) + q.sqrt()
            }
            BodyKind::Reuleaux(r) => r.support(xi),
            BodyKind::SupportSampled(s) => s.support(xi),
        })
    }

    pub fn slab(&self, xi: &Direction) -> Result<Slab> {
        let r2 = self.support(xi)?;
        let r1 = -self.support(&-*xi)?;
        // Rounding can swap the two for a degenerate direction; widths are never negative.
        Ok(Slab { r1: r1.min(r2), r2: r2.max(r1) })
    }

    pub fn width(&self, xi: &Direction) -> Result<f64> {
        Ok(self.slab(xi)?.width())
    }

    /// A point of the body where the supporting hyperplane with normal ξ touches.
    pub fn support_point(&self, xi: &Direction) -> Result<Vector> {
        self.check(xi.dim())?;
        Ok(match &self.kind {
            BodyKind::Ball { center, radius } => *center + xi.vector() * *radius,
            BodyKind::Ellipsoid { center, semi_axes } => {
                let dim = center.dim();
                let mut scaled = [0.0; 3];
                for i in 0..dim {
                    scaled[i] = semi_axes[i] * semi_axes[i] * xi.as_slice()[i];
                }
                let scaled = Vector::new(&scaled[..dim])?;
                *center + scaled * (1.0 / (scaled.dot(&xi.vector())).sqrt())
            }
            BodyKind::Reuleaux(r) => r.support_point(xi),
            BodyKind::SupportSampled(s) => s.support_point(xi),
        })
    }

    pub fn contains(&self, x: &Vector) -> Result<bool> {
        self.check(x.dim())?;
        Ok(match &self.kind {
            BodyKind::Ball { center, radius } => (*x - *center).norm_sq() <= radius * radius,
            BodyKind::Ellipsoid { center, semi_axes } => {
                let q: f64 = (0..x.dim()).map(|i| ((x[i] - center[i]) / semi_axes[i]).powi(2)).sum();
                q <= 1.0
            }
            BodyKind::Reuleaux(r) => r.contains(x),
            BodyKind::SupportSampled(s) => s.contains(x),
        })
    }

    /// Parameter interval of the line inside the body, or `None` when the
    /// intersection has zero length (misses or is tangent).
    pub fn chord(&self, line: &Line) -> Result<Option<Chord>> {
        self.check(line.dim())?;
        let chord = match &self.kind {
            BodyKind::Ball { center, radius } => ball_chord(center, *radius, line),
            BodyKind::Ellipsoid { center, semi_axes } => ellipsoid_chord(center, semi_axes, line),
            BodyKind::Reuleaux(r) => r.chord(line),
            BodyKind::SupportSampled(s) => s.chord(line),
        };
        let min_len = TANGENT_TOLERANCE * self.diameter();
        Ok(chord.filter(|c| c.length() > min_len))
    }

    /// Largest width over all directions.
    pub fn diameter(&self) -> f64 {
        match &self.kind {
            BodyKind::Ball { radius, .. } => 2.0 * radius,
            BodyKind::Ellipsoid { semi_axes, .. } => 2.0 * semi_axes.as_slice().iter().fold(0.0f64, |m, a| m.max(*a)),
            BodyKind::Reuleaux(r) => r.width,
            BodyKind::SupportSampled(s) => s.diameter(),
        }
    }

    /// A distinguished interior point: the center of symmetry for analytic
    /// kinds, the centroid of the coordinate slabs otherwise.
    pub fn reference_center(&self) -> Vector {
        match &self.kind {
            BodyKind::Ball { center, .. } | BodyKind::Ellipsoid { center, .. } => *center,
            BodyKind::Reuleaux(r) => r.center,
            BodyKind::SupportSampled(s) => {
                let dim = s.dim();
                let mut c = [0.0; 3];
                for (i, ci) in c.iter_mut().enumerate().take(dim) {
                    let e = Direction::new(Vector::axis(dim, i).expect("axis")).expect("unit axis");
                    *ci = 0.5 * (s.support(&e) - s.support(&-e));
                }
                Vector::new(&c[..dim]).expect("finite center")
            }
        }
    }

    /// The body translated by `v`.
    pub fn translated(&self, v: &Vector) -> Result<Self> {
        self.check(v.dim())?;
        Ok(match &self.kind {
            BodyKind::Ball { center, radius } => Self::ball(*center + *v, *radius)?,
            BodyKind::Ellipsoid { center, semi_axes } => Self::ellipsoid(*center + *v, *semi_axes)?,
            BodyKind::Reuleaux(r) => Self::reuleaux(r.center + *v, r.width, r.orientation)?,
            BodyKind::SupportSampled(s) => {
                let values = s.directions().iter().zip(s.values()).map(|(d, h)| h + d.dot(v)).collect();
                Self::support_sampled(s.directions().to_vec(), values)?
            }
        })
    }

    /// An interior point of the section Ω ∩ Σ, or `None` if the plane misses the body.
    ///
    /// Balls and ellipsoids use the exact center of the section. Other bodies start
    /// from the projected reference center and alternate chord midpoints along two
    /// in-plane axes, which converges into the section for convex bodies.
    pub fn section_center(&self, plane: &Hyperplane) -> Result<Option<Vector>> {
        self.check(plane.dim())?;
        let slab = self.slab(&plane.normal)?;
        let margin = TANGENT_TOLERANCE * self.diameter();
        if plane.offset <= slab.r1 + margin || plane.offset >= slab.r2 - margin {
            return Ok(None);
        }
        match &self.kind {
            BodyKind::Ball { center, .. } => Ok(Some(plane.project(center))),
            BodyKind::Ellipsoid { center, semi_axes } => {
                // Minimizer of Σ((x_i − c_i)/a_i)² on the plane: x = c + λ·A²ω.
                let dim = center.dim();
                let omega = plane.normal.as_slice();
                let mut a2w = [0.0; 3];
                for i in 0..dim {
                    a2w[i] = semi_axes[i] * semi_axes[i] * omega[i];
                }
                let a2w = Vector::new(&a2w[..dim])?;
                let lambda = (plane.offset - plane.normal.dot(center)) / plane.normal.dot(&a2w);
                Ok(Some(*center + a2w * lambda))
            }
            _ => self.section_center_iterative(plane),
        }
    }

    fn section_center_iterative(&self, plane: &Hyperplane) -> Result<Option<Vector>> {
        let axes: Vec<Direction> = match plane.dim() {
            2 => vec![plane.normal.perp()],
            _ => {
                let (a, b) = plane.normal.orthonormal_complement();
                vec![a, b]
            }
        };
        let mut x = plane.project(&self.reference_center());
        if !self.midpoint_sweep(&mut x, &axes)? {
            // The projection missed the section: scan the second in-plane axis for a hit.
            let span = self.diameter();
            let probe = *axes.last().unwrap();
            let found = (1..=64).flat_map(|k| [k as f64, -(k as f64)]).find_map(|k| {
                let mut y = x + probe.vector() * (span * k / 64.0);
                self.midpoint_sweep(&mut y, &axes).ok().filter(|hit| *hit).map(|_| y)
            });
            match found {
                Some(y) => x = y,
                None => return Ok(None),
            }
        }
        for _ in 0..8 {
            self.midpoint_sweep(&mut x, &axes)?;
        }
        Ok(Some(x))
    }

    /// Moves `x` to the chord midpoint along each axis in turn; false if any chord is empty.
    fn midpoint_sweep(&self, x: &mut Vector, axes: &[Direction]) -> Result<bool> {
        for axis in axes {
            let line = Line::through(x, *axis)?;
            match self.chord(&line)? {
                Some(c) => *x = line.at(c.mid()),
                None => return Ok(false),
            }
        }
        Ok(true)
    }
}

pub(crate) fn ball_chord(center: &Vector, radius: f64, line: &Line) -> Option<Chord> {
    let u = line.dir().vector();
    let m = u.dot(&(*center - line.point()));
    let foot = line.at(m);
    let dist = (foot - *center).norm();
    if dist >= radius {
        return None;
    }
    let half = ((radius - dist) * (radius + dist)).sqrt();
    Some(Chord { t_in: m - half, t_out: m + half })
}

fn ellipsoid_chord(center: &Vector, semi_axes: &Vector, line: &Line) -> Option<Chord> {
    let (p, u) = (line.point(), line.dir().vector());
    let (mut a, mut b, mut c) = (0.0, 0.0, -1.0);
    for i in 0..p.dim() {
        let inv = 1.0 / (semi_axes[i] * semi_axes[i]);
        let q = p[i] - center[i];
        a += u[i] * u[i] * inv;
        b += 2.0 * u[i] * q * inv;
        c += q * q * inv;
    }
    let disc = b * b - 4.0 * a * c;
    if disc <= 0.0 {
        return None;
    }
    let s = disc.sqrt();
    // Stable quadratic roots.
    let q = -0.5 * (b + b.signum() * s);
    let (t1, t2) = if q == 0.0 { (-s / (2.0 * a), s / (2.0 * a)) } else { (q / a, c / q) };
    Some(Chord { t_in: t1.min(t2), t_out: t1.max(t2) })
}
