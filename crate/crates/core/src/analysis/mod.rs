//! Moment functionals of sinograms and the rigidity tests built on them.
//!
//! For each direction ω the zeroth moment K(ω) = ∫ Rf(ω, p) dp is the total mass
//! of f and the first moment g(ω) = ∫ p·Rf(ω, p) dp equals ∫⟨x, ω⟩f(x) dx, a
//! linear function of ω. Sinograms whose values depend only on the distance to
//! the nearer supporting plane force both to take a special form, which the
//! checks in [`rigidity_check`] test one by one.

mod rigidity;
mod section;

use serde::Serialize;

pub use rigidity::{
    constant_width_check, estimate_slabs, g_profile_collapse, rigidity_check, sinogram_slabs, Check, Checks, Estimates,
    GProfile, RigidityReport, Tolerances, Verdict, WidthCheck, DEFAULT_BINS,
};
pub use section::{planar_section_check, SectionReport};

use crate::error::{Error, Result};
use crate::geometry::{Direction, Slab, Vector};
use crate::quadrature::{detect_chebyshev_interval, fejer_first};
use crate::transforms::{Sinogram, MIN_OFFSETS};

/// Integration weights for one direction's offsets: Fejér's first rule on an
/// interior Chebyshev grid, the trapezoidal rule on any other increasing grid.
pub fn offset_quadrature(offsets: &[f64]) -> Result<Vec<f64>> {
    let n = offsets.len();
    if n < MIN_OFFSETS {
        return Err(Error::InsufficientSamples { needed: MIN_OFFSETS, found: n });
    }
    if let Some((a, b)) = detect_chebyshev_interval(offsets) {
        let half = 0.5 * (b - a);
        return Ok(fejer_first(n).1.into_iter().map(|w| w * half).collect());
    }
    if offsets.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidGrid("offsets must increase strictly".into()));
    }
    let mut w = vec![0.0; n];
    for (k, pair) in offsets.windows(2).enumerate() {
        let h = 0.5 * (pair[1] - pair[0]);
        w[k] += h;
        w[k + 1] += h;
    }
    Ok(w)
}

fn moments_at(sino: &Sinogram, i: usize) -> Result<(f64, f64)> {
    let (p, v) = (&sino.offsets[i], &sino.values[i]);
    let w = offset_quadrature(p)?;
    let k = w.iter().zip(v).map(|(w, v)| w * v).sum();
    let g = w.iter().zip(p).zip(v).map(|((w, p), v)| w * p * v).sum();
    Ok((k, g))
}

fn index_of(sino: &Sinogram, omega: &Direction) -> Result<usize> {
    sino.direction_index(omega).ok_or_else(|| Error::InvalidDirection(format!("{omega:?} is not a sinogram direction")))
}

/// K(ω) = ∫ Rf(ω, p) dp.
pub fn zeroth_moment(sino: &Sinogram, omega: &Direction) -> Result<f64> {
    Ok(moments_at(sino, index_of(sino, omega)?)?.0)
}

/// g(ω) = ∫ p·Rf(ω, p) dp.
pub fn first_moment(sino: &Sinogram, omega: &Direction) -> Result<f64> {
    Ok(moments_at(sino, index_of(sino, omega)?)?.1)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinearFit {
    pub m: Vector,
    /// max |g(ω) − ⟨m, ω⟩| / (|K|·diameter).
    pub residual: f64,
}

/// Least-squares m with g(ω) ≈ ⟨m, ω⟩.
pub fn fit_linear_form(directions: &[Direction], g: &[f64], k_mean: f64, diameter: f64) -> Result<LinearFit> {
    if directions.len() != g.len() {
        return Err(Error::InvalidGrid(format!("{} directions but {} moments", directions.len(), g.len())));
    }
    let dim = directions.first().ok_or(Error::RankDeficient)?.dim();
    if directions.len() < 2 * dim {
        return Err(Error::InsufficientSamples { needed: 2 * dim, found: directions.len() });
    }
    let mut a = [[0.0; 4]; 3];
    for (d, gv) in directions.iter().zip(g) {
        if d.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: d.dim() });
        }
        let w = d.as_slice();
        for r in 0..dim {
            for c in 0..dim {
                a[r][c] += w[r] * w[c];
            }
            a[r][dim] += w[r] * gv;
        }
    }
    let trace: f64 = (0..dim).map(|i| a[i][i]).sum();
    let m = solve(&mut a, dim, 1e-10 * trace)?;
    let m = Vector::new(&m[..dim])?;
    let worst = directions.iter().zip(g).map(|(d, gv)| (gv - d.dot(&m)).abs()).fold(0.0, f64::max);
    let scale = k_mean.abs() * diameter;
    let residual = if worst == 0.0 { 0.0 } else { worst / scale };
    Ok(LinearFit { m, residual })
}

/// Gaussian elimination with partial pivoting on an augmented dim × (dim+1) system.
fn solve(a: &mut [[f64; 4]; 3], dim: usize, min_pivot: f64) -> Result<[f64; 3]> {
    for col in 0..dim {
        let pivot = (col..dim).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).expect("non-empty");
        if !(a[pivot][col].abs() > min_pivot) {
            return Err(Error::RankDeficient);
        }
        a.swap(col, pivot);
        let (top, rest) = a.split_at_mut(col + 1);
        let p = &top[col];
        for row in rest.iter_mut().take(dim - col - 1) {
            let f = row[col] / p[col];
            for (x, y) in row[col..=dim].iter_mut().zip(&p[col..=dim]) {
                *x -= f * y;
            }
        }
    }
    let mut x = [0.0; 3];
    for r in (0..dim).rev() {
        let s: f64 = (r + 1..dim).map(|c| a[r][c] * x[c]).sum();
        x[r] = (a[r][dim] - s) / a[r][r];
    }
    Ok(x)
}

/// Per-direction moments and the linear form fitted to g.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentReport {
    pub directions: Vec<Vec<f64>>,
    pub k: Vec<f64>,
    pub g: Vec<f64>,
    pub k_mean: f64,
    /// (max K − min K) / mean K.
    pub k_spread: f64,
    pub m: Vector,
    pub residual: f64,
    /// m / mean K.
    pub center: Vector,
    /// Largest slab width, used to normalize the residual.
    pub diameter: f64,
}

/// Moments of every direction of `sino`; `slabs` supply the diameter.
pub fn moment_report(sino: &Sinogram, slabs: &[Slab]) -> Result<MomentReport> {
    sino.validate()?;
    let n = sino.directions.len();
    if n < 2 * sino.dimension {
        return Err(Error::InsufficientSamples { needed: 2 * sino.dimension, found: n });
    }
    if slabs.len() != n {
        return Err(Error::InvalidGrid(format!("{} slabs for {n} directions", slabs.len())));
    }
    let (k, g): (Vec<f64>, Vec<f64>) =
        (0..n).map(|i| moments_at(sino, i)).collect::<Result<Vec<_>>>()?.into_iter().unzip();
    let k_mean = k.iter().sum::<f64>() / n as f64;
    let (lo, hi) = k.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(*v), hi.max(*v)));
    if !(k_mean.abs() > 0.0) {
        return Err(Error::Numeric("zeroth moment vanishes; the sinogram carries no mass".into()));
    }
    let k_spread = (hi - lo) / k_mean.abs();
    let diameter = slabs.iter().map(Slab::width).fold(0.0, f64::max);
    let fit = fit_linear_form(&sino.directions, &g, k_mean, diameter)?;
    Ok(MomentReport {
        directions: sino.directions.iter().map(|d| d.as_slice().to_vec()).collect(),
        center: fit.m * (1.0 / k_mean),
        k,
        g,
        k_mean,
        k_spread,
        m: fit.m,
        residual: fit.residual,
        diameter,
    })
}
