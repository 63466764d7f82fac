//! X-ray and Radon transforms of test functions on convex bodies.
//!
//! Chord integrals of functions supported on a ball use the substitution
//! t = mid + half·sin θ. Along a chord of B(c, R) the depth R² − |x − c|² equals
//! half²·cos²θ exactly, so integrands of the form (depth)^γ become
//! half^{2γ+1}·cos^{2γ+1}θ: constant for γ = −½ and bounded for γ > −½, which
//! Gauss–Legendre then integrates to spectral accuracy. Planar sections in R³ use
//! polar coordinates about the section center with the same substitution on the
//! radius, r = ρ·sin φ.

mod function;
mod sinogram;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, TAU};

pub use function::{FunctionKind, RadialTable, TestFunction};
pub use sinogram::{
    direction_grid, sinogram, synthetic_sinogram, Sinogram, SinogramMeta, SinogramOptions, TransformKind, MIN_OFFSETS,
};

use crate::error::{Error, Result};
use crate::geometry::{ConvexBody, Hyperplane, Line, Vector, TANGENT_TOLERANCE};
use crate::quadrature::GaussLegendre;

/// Quadrature settings shared by every transform evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct Quadrature {
    rule: GaussLegendre,
    angular: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self { rule: crate::quadrature::default_rule().clone(), angular: 128 }
    }
}

impl Quadrature {
    pub const DEFAULT_NODES: usize = 64;
    pub const DEFAULT_ANGULAR: usize = 128;

    pub fn new(nodes: usize, angular: usize) -> Result<Self> {
        if angular < 3 {
            return Err(Error::InvalidGrid(format!("angular rule needs at least 3 nodes, got {angular}")));
        }
        Ok(Self { rule: GaussLegendre::new(nodes)?, angular })
    }

    pub fn nodes(&self) -> usize {
        self.rule.len()
    }

    pub fn angular(&self) -> usize {
        self.angular
    }

    pub fn rule(&self) -> &GaussLegendre {
        &self.rule
    }
}

fn finite(value: f64, what: &str) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Numeric(format!("non-finite {what} ({value})")))
    }
}

/// ∫ f(x + tξ) dt over the line; 0 when the line misses the support.
pub fn xray(f: &TestFunction, line: &Line, quad: &Quadrature) -> Result<f64> {
    if line.dim() != f.dimension() {
        return Err(Error::DimensionMismatch { expected: f.dimension(), found: line.dim() });
    }
    match f.radial_ball() {
        Some((center, radius)) => radial_chord_integral(f, &center, radius, line, quad),
        None => {
            let chord = f.support().chord(line)?;
            Ok(chord.map_or(0.0, |c| c.length() * f.scale()))
        }
    }
}

fn radial_chord_integral(
    f: &TestFunction,
    center: &Vector,
    radius: f64,
    line: &Line,
    quad: &Quadrature,
) -> Result<f64> {
    let u = line.dir().vector();
    let mid = u.dot(&(*center - line.point()));
    let dist = (line.at(mid) - *center).norm();
    if dist >= radius {
        return Ok(0.0);
    }
    let half = ((radius - dist) * (radius + dist)).sqrt();
    if 2.0 * half <= TANGENT_TOLERANCE * 2.0 * radius {
        return Ok(0.0);
    }
    let (half_sq, dist_sq) = (half * half, dist * dist);
    let mut sum = 0.0;
    for (x, w) in quad.rule.pairs() {
        let theta = FRAC_PI_2 * x;
        let (s, c) = theta.sin_cos();
        let hc = half * c;
        sum += w * f.radial_value(hc * hc, dist_sq + half_sq * s * s) * hc;
    }
    finite(sum * FRAC_PI_2, "chord integral")
}

/// Integral of f over the hyperplane {⟨x, ω⟩ = p}. In the plane this is the X-ray
/// transform along the line; in space it integrates over the planar section.
pub fn radon(f: &TestFunction, plane: &Hyperplane, quad: &Quadrature) -> Result<f64> {
    let dim = f.dimension();
    if plane.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: plane.dim() });
    }
    if dim == 2 {
        return xray(f, &plane.to_line()?, quad);
    }
    match f.radial_ball() {
        Some((center, radius)) => radial_section_integral(f, &center, radius, plane, quad),
        None => Ok(section_area(f.support(), plane, quad)? * f.scale()),
    }
}

fn radial_section_integral(
    f: &TestFunction,
    center: &Vector,
    radius: f64,
    plane: &Hyperplane,
    quad: &Quadrature,
) -> Result<f64> {
    let dist = (plane.offset - plane.normal.dot(center)).abs();
    if dist >= radius {
        return Ok(0.0);
    }
    let rho = ((radius - dist) * (radius + dist)).sqrt();
    if rho <= TANGENT_TOLERANCE * radius {
        return Ok(0.0);
    }
    // The integrand is constant along each circle about the section center, so the
    // trapezoidal angular factor is exactly 2π.
    let (rho_sq, dist_sq) = (rho * rho, dist * dist);
    let mut sum = 0.0;
    for (x, w) in quad.rule.pairs() {
        let phi = FRAC_PI_4 * (1.0 + x);
        let (s, c) = phi.sin_cos();
        let rc = rho * c;
        sum += w * f.radial_value(rc * rc, dist_sq + rho_sq * s * s) * rho_sq * s * c;
    }
    finite(sum * FRAC_PI_4 * TAU, "section integral")
}

/// Area of the planar section Ω ∩ Σ of a spatial body: trapezoidal rule in the
/// polar angle about an interior point, with the boundary radius from chords.
fn section_area(body: &ConvexBody, plane: &Hyperplane, quad: &Quadrature) -> Result<f64> {
    let Some(center) = body.section_center(plane)? else {
        return Ok(0.0);
    };
    let (e1, e2) = plane.normal.orthonormal_complement();
    let n = quad.angular;
    let mut sum = 0.0;
    for j in 0..n {
        let (s, c) = (TAU * j as f64 / n as f64).sin_cos();
        let u = crate::geometry::Direction::normalize(e1.vector() * c + e2.vector() * s)?;
        let line = Line::through(&center, u)?;
        let rho = body.chord(&line)?.map_or(0.0, |ch| (ch.t_out - u.dot(&center)).max(0.0));
        sum += 0.5 * rho * rho;
    }
    finite(sum * TAU / n as f64, "section area")
}

/// (n−1)-dimensional measure of Ω ∩ Σ: chord length in the plane, section area in space.
pub fn section_measure(body: &ConvexBody, plane: &Hyperplane, quad: &Quadrature) -> Result<f64> {
    let dim = body.dimension();
    if plane.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: plane.dim() });
    }
    if dim == 2 {
        return Ok(body.chord(&plane.to_line()?)?.map_or(0.0, |c| c.length()));
    }
    section_area(body, plane, quad)
}

#[cfg(test)]
mod tests;
