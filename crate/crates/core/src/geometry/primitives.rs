use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on |ξ| − 1 for a vector to be accepted as a direction.
pub const UNIT_TOLERANCE: f64 = 1e-12;
/// Tolerance on ⟨point, dir⟩ for a line's base point.
pub const LINE_TOLERANCE: f64 = 1e-10;

/// A point or vector in R² or R³.
///
/// Storage is fixed at three components so the type stays `Copy`; the unused
/// third component of a planar vector is always zero.
#[derive(Clone, Copy, PartialEq)]
pub struct Vector {
    dim: usize,
    c: [f64; 3],
}

impl Vector {
    pub fn new(components: &[f64]) -> Result<Self> {
        let dim = components.len();
        if !(2..=3).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        if components.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain(format!("non-finite component in {components:?}")));
        }
        let mut c = [0.0; 3];
        c[..dim].copy_from_slice(components);
        Ok(Self { dim, c })
    }

    pub fn xy(x: f64, y: f64) -> Self {
        Self { dim: 2, c: [x, y, 0.0] }
    }

    pub fn xyz(x: f64, y: f64, z: f64) -> Self {
        Self { dim: 3, c: [x, y, z] }
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        if !(2..=3).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        Ok(Self { dim, c: [0.0; 3] })
    }

    /// The i-th standard basis vector.
    pub fn axis(dim: usize, i: usize) -> Result<Self> {
        let mut v = Self::zeros(dim)?;
        if i >= dim {
            return Err(Error::Domain(format!("axis {i} out of range for dimension {dim}")));
        }
        v.c[i] = 1.0;
        Ok(v)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.c[..self.dim]
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.as_slice().to_vec()
    }

    #[inline]
    pub fn dot(&self, other: &Vector) -> f64 {
        debug_assert_eq!(self.dim, other.dim);
        self.c[0] * other.c[0] + self.c[1] * other.c[1] + self.c[2] * other.c[2]
    }

    #[inline]
    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn cross(&self, other: &Vector) -> Vector {
        let (a, b) = (self.c, other.c);
        Vector::xyz(a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])
    }

    pub fn distance(&self, other: &Vector) -> f64 {
        (*self - *other).norm()
    }

    pub(crate) fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim != expected {
            return Err(Error::DimensionMismatch { expected, found: self.dim });
        }
        Ok(())
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.as_slice())
    }
}

impl Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.as_slice()[i]
    }
}

impl Add for Vector {
    type Output = Vector;
    fn add(self, o: Vector) -> Vector {
        debug_assert_eq!(self.dim, o.dim);
        Vector { dim: self.dim, c: [self.c[0] + o.c[0], self.c[1] + o.c[1], self.c[2] + o.c[2]] }
    }
}

impl Sub for Vector {
    type Output = Vector;
    fn sub(self, o: Vector) -> Vector {
        debug_assert_eq!(self.dim, o.dim);
        Vector { dim: self.dim, c: [self.c[0] - o.c[0], self.c[1] - o.c[1], self.c[2] - o.c[2]] }
    }
}

impl Mul<f64> for Vector {
    type Output = Vector;
    fn mul(self, s: f64) -> Vector {
        Vector { dim: self.dim, c: [self.c[0] * s, self.c[1] * s, self.c[2] * s] }
    }
}

impl Neg for Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        self * -1.0
    }
}

impl Serialize for Vector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.as_slice().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Vector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<f64>::deserialize(d)?;
        Vector::new(&v).map_err(serde::de::Error::custom)
    }
}

/// A unit vector: the normal ω of a hyperplane or the direction ξ of a line.
#[derive(Clone, Copy, PartialEq)]
pub struct Direction(Vector);

impl Direction {
    /// Accepts `v` only if it is already unit length.
    pub fn new(v: Vector) -> Result<Self> {
        let n = v.norm();
        if (n - 1.0).abs() > UNIT_TOLERANCE {
            return Err(Error::InvalidDirection(format!("|{v:?}| = {n} is not 1")));
        }
        Ok(Self(v))
    }

    pub fn from_slice(components: &[f64]) -> Result<Self> {
        Self::new(Vector::new(components)?)
    }

    pub fn normalize(v: Vector) -> Result<Self> {
        let n = v.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidDirection(format!("cannot normalize {v:?}")));
        }
        Ok(Self(v * (1.0 / n)))
    }

    /// Planar direction (cos θ, sin θ).
    pub fn from_angle(theta: f64) -> Self {
        Self(Vector::xy(theta.cos(), theta.sin()))
    }

    pub fn from_spherical(polar: f64, azimuth: f64) -> Self {
        let s = polar.sin();
        Self(Vector::xyz(s * azimuth.cos(), s * azimuth.sin(), polar.cos()))
    }

    #[inline]
    pub fn vector(&self) -> Vector {
        self.0
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    #[inline]
    pub fn dot(&self, v: &Vector) -> f64 {
        self.0.dot(v)
    }

    pub fn as_slice(&self) -> &[f64] {
        self.0.as_slice()
    }

    /// Angle of a planar direction in (−π, π].
    pub fn angle(&self) -> f64 {
        self.0[1].atan2(self.0[0])
    }

    /// Planar direction rotated by +90°.
    pub fn perp(&self) -> Direction {
        debug_assert_eq!(self.dim(), 2);
        Direction(Vector::xy(-self.0[1], self.0[0]))
    }

    /// An orthonormal basis of the complement of a spatial direction.
    pub fn orthonormal_complement(&self) -> (Direction, Direction) {
        debug_assert_eq!(self.dim(), 3);
        let v = self.0;
        // Pick the coordinate axis least aligned with v.
        let (ax, ay, az) = (v[0].abs(), v[1].abs(), v[2].abs());
        let pivot = if ax <= ay && ax <= az {
            Vector::xyz(1.0, 0.0, 0.0)
        } else if ay <= az {
            Vector::xyz(0.0, 1.0, 0.0)
        } else {
            Vector::xyz(0.0, 0.0, 1.0)
        };
        let e1 = pivot - v * v.dot(&pivot);
        let e1 = e1 * (1.0 / e1.norm());
        let e2 = v.cross(&e1);
        (Direction(e1), Direction(e2))
    }
}

impl Neg for Direction {
    type Output = Direction;
    fn neg(self) -> Direction {
        Direction(-self.0)
    }
}

impl fmt::Debug for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Direction{:?}", self.0.as_slice())
    }
}

/// The hyperplane {x : ⟨x, normal⟩ = offset}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hyperplane {
    pub normal: Direction,
    pub offset: f64,
}

impl Hyperplane {
    pub fn new(normal: Direction, offset: f64) -> Self {
        Self { normal, offset }
    }

    pub fn dim(&self) -> usize {
        self.normal.dim()
    }

    /// Representative of {(ω, p), (−ω, −p)} whose first nonzero normal component is positive.
    pub fn canonical(&self) -> Hyperplane {
        let first = self.normal.as_slice().iter().copied().find(|c| *c != 0.0).unwrap_or(1.0);
        if first < 0.0 {
            Hyperplane { normal: -self.normal, offset: -self.offset }
        } else {
            *self
        }
    }

    pub fn same_plane(&self, other: &Hyperplane, tol: f64) -> bool {
        let (a, b) = (self.canonical(), other.canonical());
        (a.normal.vector() - b.normal.vector()).norm() <= tol && (a.offset - b.offset).abs() <= tol
    }

    /// Closest point of the plane to `x`.
    pub fn project(&self, x: &Vector) -> Vector {
        *x + self.normal.vector() * (self.offset - self.normal.dot(x))
    }

    /// The plane of a planar problem viewed as a line.
    pub fn to_line(&self) -> Result<Line> {
        if self.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: self.dim() });
        }
        Ok(Line { point: self.normal.vector() * self.offset, dir: self.normal.perp() })
    }
}

/// An oriented line {point + t·dir}, with `point` orthogonal to `dir`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Line {
    point: Vector,
    dir: Direction,
}

impl Line {
    pub fn new(point: Vector, dir: Direction) -> Result<Self> {
        point.check_dim(dir.dim())?;
        let ip = point.dot(&dir.vector());
        if ip.abs() > LINE_TOLERANCE {
            return Err(Error::InvalidLine(format!("⟨point, dir⟩ = {ip:e} is not 0")));
        }
        Ok(Self { point, dir })
    }

    /// The line through `x` with direction `dir`. The parameter of `x` on the line is ⟨x, dir⟩.
    pub fn through(x: &Vector, dir: Direction) -> Result<Self> {
        x.check_dim(dir.dim())?;
        let point = *x - dir.vector() * dir.dot(x);
        Ok(Self { point, dir })
    }

    pub fn point(&self) -> Vector {
        self.point
    }

    pub fn dir(&self) -> Direction {
        self.dir
    }

    pub fn dim(&self) -> usize {
        self.dir.dim()
    }

    pub fn at(&self, t: f64) -> Vector {
        self.point + self.dir.vector() * t
    }
}

/// The pair of supporting hyperplanes with common normal ξ, as signed offsets r1 ≤ r2.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Slab {
    pub r1: f64,
    pub r2: f64,
}

impl Slab {
    pub fn new(r1: f64, r2: f64) -> Result<Self> {
        if !(r1.is_finite() && r2.is_finite()) || r1 > r2 {
            return Err(Error::Domain(format!("invalid slab [{r1}, {r2}]")));
        }
        Ok(Self { r1, r2 })
    }

    pub fn width(&self) -> f64 {
        self.r2 - self.r1
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.r1 + self.r2)
    }

    /// Distance from the plane at offset `p` to the nearer supporting plane.
    pub fn distance_to_nearest(&self, p: f64) -> f64 {
        (p - self.r1).min(self.r2 - p)
    }
}

/// Parameter interval {t : point + t·dir ∈ Ω} of a line through a body.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Chord {
    pub t_in: f64,
    pub t_out: f64,
}

impl Chord {
    pub fn length(&self) -> f64 {
        self.t_out - self.t_in
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.t_in + self.t_out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direction_rejects_non_unit() {
        assert!(Direction::new(Vector::xy(1.0, 1.0)).is_err());
        assert!(Direction::new(Vector::xy(0.6, 0.8)).is_ok());
        assert!(Direction::normalize(Vector::xy(0.0, 0.0)).is_err());
    }

    #[test]
    fn vector_rejects_bad_dimension() {
        assert!(matches!(Vector::new(&[1.0]), Err(Error::UnsupportedDimension(1))));
        assert!(matches!(Vector::new(&[0.0; 4]), Err(Error::UnsupportedDimension(4))));
        assert!(Vector::new(&[f64::NAN, 0.0]).is_err());
    }

    #[test]
    fn canonical_plane_flips_sign() {
        let p = Hyperplane::new(Direction::from_slice(&[-0.6, 0.8]).unwrap(), 0.5);
        let c = p.canonical();
        assert_eq!(c.normal.as_slice(), &[0.6, -0.8]);
        assert_eq!(c.offset, -0.5);
        let q = Hyperplane::new(Direction::from_slice(&[0.0, -1.0, 0.0]).unwrap(), 2.0);
        assert_eq!(q.canonical().offset, -2.0);
        assert!(p.same_plane(&c, 0.0));
    }

    #[test]
    fn line_requires_orthogonal_point() {
        let d = Direction::from_angle(0.0);
        assert!(Line::new(Vector::xy(0.0, 0.6), d).is_ok());
        assert!(Line::new(Vector::xy(0.1, 0.6), d).is_err());
        let l = Line::through(&Vector::xy(0.3, 0.6), d).unwrap();
        assert_eq!(l.point().as_slice(), &[0.0, 0.6]);
    }

    #[test]
    fn complement_is_orthonormal() {
        let d = Direction::normalize(Vector::xyz(0.3, -0.5, 0.8)).unwrap();
        let (a, b) = d.orthonormal_complement();
        for (x, y) in [(a, b), (a, d), (b, d)] {
            assert!(x.dot(&y.vector()).abs() < 1e-15);
        }
        assert!((a.vector().norm() - 1.0).abs() < 1e-15);
        assert!((b.vector().norm() - 1.0).abs() < 1e-15);
    }
}
