use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::Serialize;

use super::solve;
use crate::error::{Error, Result};
use crate::geometry::{ConvexBody, Direction, Line, Vector};
use crate::transforms::direction_grid;

const SEARCH_DIRECTIONS: usize = 2000;
const RAYS: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SectionReport {
    pub is_ball: bool,
    /// Midpoint of the maximal chord.
    pub center: Vector,
    /// Mean radius of the fitted circles.
    pub radius: f64,
    /// Direction of the maximal chord.
    pub axis: Vector,
    pub planes: usize,
    /// Largest distance of a boundary point from its section's fitted circle.
    pub max_deviation: f64,
    /// Largest distance of a fitted circle center from the chord midpoint.
    pub max_center_offset: f64,
    /// (max − min) / mean of the fitted radii.
    pub radius_spread: f64,
    pub tolerance: f64,
}

fn width_at(body: &ConvexBody, polar: f64, azimuth: f64) -> Result<f64> {
    body.width(&Direction::from_spherical(polar, azimuth))
}

/// Direction of largest width: best point of a Fibonacci grid, then a compass
/// search in spherical coordinates.
fn widest_direction(body: &ConvexBody) -> Result<Direction> {
    let grid = direction_grid(3, SEARCH_DIRECTIONS, None)?;
    let widths = grid.iter().map(|d| body.width(d)).collect::<Result<Vec<_>>>()?;
    let best = (0..grid.len()).max_by(|&a, &b| widths[a].total_cmp(&widths[b])).expect("non-empty grid");
    let v = grid[best].vector();
    let (mut polar, mut azimuth) = (v[2].clamp(-1.0, 1.0).acos(), v[1].atan2(v[0]));
    let mut current = widths[best];
    let mut step = 0.05;
    while step > 1e-10 {
        let mut improved = false;
        for (dp, da) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
            let w = width_at(body, polar + dp, azimuth + da)?;
            if w > current {
                (polar, azimuth, current) = (polar + dp, azimuth + da, w);
                improved = true;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    Ok(Direction::from_spherical(polar, azimuth))
}

/// Algebraic (Kåsa) circle fit: returns (center x, center y, radius).
fn fit_circle(points: &[(f64, f64)]) -> Result<(f64, f64, f64)> {
    let mut a = [[0.0; 4]; 3];
    for &(x, y) in points {
        let row = [x, y, 1.0];
        let rhs = -(x * x + y * y);
        for r in 0..3 {
            for c in 0..3 {
                a[r][c] += row[r] * row[c];
            }
            a[r][3] += row[r] * rhs;
        }
    }
    let trace = a[0][0] + a[1][1] + a[2][2];
    let [d, e, f] = solve(&mut a, 3, 1e-14 * trace)?;
    let (cx, cy) = (-0.5 * d, -0.5 * e);
    let r_sq = cx * cx + cy * cy - f;
    if !(r_sq > 0.0) {
        return Err(Error::Numeric("circle fit produced a non-positive radius".into()));
    }
    Ok((cx, cy, r_sq.sqrt()))
}

/// Tests whether a spatial body is a ball through its sections by planes that
/// contain a maximal chord: each section must be a circle about the chord
/// midpoint, and all circles must have the same radius, within `tol`·diameter.
pub fn planar_section_check(body: &ConvexBody, planes: usize, tol: f64) -> Result<SectionReport> {
    if body.dimension() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: body.dimension() });
    }
    if planes == 0 {
        return Err(Error::InvalidGrid("need at least one plane".into()));
    }
    let axis = widest_direction(body)?;
    let diameter = body.width(&axis)?;
    if !(diameter > 1e-12) {
        return Err(Error::DegenerateBody(format!("width {diameter} along the widest direction")));
    }
    let center = (body.support_point(&axis)? + body.support_point(&-axis)?) * 0.5;
    let (e1, e2) = axis.orthonormal_complement();
    let xi = axis.vector();

    let fits = (0..planes)
        .into_par_iter()
        .map(|k| {
            let alpha = PI * k as f64 / planes as f64;
            let t = e1.vector() * alpha.cos() + e2.vector() * alpha.sin();
            let mut points = Vec::with_capacity(RAYS);
            for j in 0..RAYS {
                let (s, c) = (TAU * j as f64 / RAYS as f64).sin_cos();
                let u = Direction::normalize(xi * c + t * s)?;
                let chord = body
                    .chord(&Line::through(&center, u)?)?
                    .ok_or_else(|| Error::DegenerateBody("chord midpoint lies outside the body".into()))?;
                let rho = chord.t_out - u.dot(&center);
                points.push((rho * c, rho * s));
            }
            let (cx, cy, r) = fit_circle(&points)?;
            let dev = points.iter().map(|(x, y)| ((x - cx).hypot(y - cy) - r).abs()).fold(0.0, f64::max);
            Ok((cx.hypot(cy), r, dev))
        })
        .collect::<Result<Vec<_>>>()?;

    let radii: Vec<f64> = fits.iter().map(|f| f.1).collect();
    let mean = radii.iter().sum::<f64>() / radii.len() as f64;
    let (lo, hi) = radii.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), r| (l.min(*r), h.max(*r)));
    let max_deviation = fits.iter().map(|f| f.2).fold(0.0, f64::max) / diameter;
    let max_center_offset = fits.iter().map(|f| f.0).fold(0.0, f64::max) / diameter;
    let radius_spread = (hi - lo) / mean;
    Ok(SectionReport {
        is_ball: max_deviation <= tol && max_center_offset <= tol && radius_spread <= tol,
        center,
        radius: mean,
        axis: xi,
        planes,
        max_deviation,
        max_center_offset,
        radius_spread,
        tolerance: tol,
    })
}
