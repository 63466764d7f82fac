//! Closed-form reference values.
//!
//! * The family f_γ(x) = (R² − |x|²)^γ on B(0, R), γ > −1, whose hyperplane
//!   integrals are c_n(γ)(R² − d²)^{(n−1)/2+γ} with
//!   c_n(γ) = ½(n−1)·α_{n−1}·B((n−1)/2, γ+1), α_k the volume of the unit k-ball.
//! * The function χ_{|x|<R} / (π√(R² − |x|²)), whose integral over every chord of
//!   the ball is 1.
//! * For a function whose hyperplane integrals are identically 1 on B(0, R), the
//!   Fourier transform along any ray is 2 sin(R|ξ|)/|ξ|.
//! * The planar kernel (1/2π)·sgn(t)·χ_{|x|<|t|}·(t² − |x|²)^{−1/2}.
//!
//! The higher-dimensional analogue of that kernel, C_n·lim_{ε↓0}(|x|² − (t+iε)²)^{−(n−1)/2}
//! with C_n = Γ((n+1)/2)/((n−1)π^{(n+1)/2}), is not locally integrable for n ≥ 3
//! and has no finite value to check; it is deliberately not evaluated here.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::geometry::Vector;

/// Parameters of the γ-family f_γ = (R² − |x|²)^γ in dimension n.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaFamilySpec {
    pub radius: f64,
    pub gamma: f64,
    pub dim: usize,
}

impl GammaFamilySpec {
    pub fn new(radius: f64, gamma: f64, dim: usize) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Domain(format!("radius must be positive, got {radius}")));
        }
        check_gamma(gamma)?;
        if dim < 2 {
            return Err(Error::Domain(format!("dimension must be at least 2, got {dim}")));
        }
        Ok(Self { radius, gamma, dim })
    }

    /// Exponent (n−1)/2 + γ of the hyperplane integrals.
    pub fn exponent(&self) -> f64 {
        0.5 * (self.dim as f64 - 1.0) + self.gamma
    }

    /// G(s): the hyperplane integral at distance s from the nearer supporting plane.
    pub fn profile(&self, s: f64) -> Result<f64> {
        radon_gamma(self, self.radius - s)
    }

    /// ∫ f_γ over the ball: π^{n/2}·Γ(γ+1)/Γ(γ+1+n/2)·R^{n+2γ}.
    pub fn mass(&self) -> f64 {
        let n = self.dim as f64;
        let ln = 0.5 * n * PI.ln() + ln_gamma(self.gamma + 1.0) - ln_gamma(self.gamma + 1.0 + 0.5 * n)
            + (n + 2.0 * self.gamma) * self.radius.ln();
        ln.exp()
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > -1.0) || !gamma.is_finite() {
        return Err(Error::Domain(format!("γ must exceed −1 for integrability, got {gamma}")));
    }
    Ok(())
}

/// Volume of the unit ball in R^k: π^{k/2}/Γ(k/2 + 1).
pub fn unit_ball_volume(k: usize) -> f64 {
    let k = k as f64;
    (0.5 * k * PI.ln() - ln_gamma(0.5 * k + 1.0)).exp()
}

/// c_n(γ) = ½(n−1)·α_{n−1}·B((n−1)/2, γ+1), evaluated through log-Gamma.
pub fn c_n(n: usize, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    if n < 2 {
        return Err(Error::Domain(format!("dimension must be at least 2, got {n}")));
    }
    let m = n as f64 - 1.0;
    let ln_alpha = 0.5 * m * PI.ln() - ln_gamma(0.5 * m + 1.0);
    let ln_beta = ln_gamma(0.5 * m) + ln_gamma(gamma + 1.0) - ln_gamma(0.5 * m + gamma + 1.0);
    Ok(0.5 * m * (ln_alpha + ln_beta).exp())
}

/// Integral of f_γ over a hyperplane at distance `d` from the center; 0 once |d| ≥ R.
pub fn radon_gamma(spec: &GammaFamilySpec, d: f64) -> Result<f64> {
    let d = d.abs();
    let r = spec.radius;
    if d >= r {
        return Ok(0.0);
    }
    let exponent = spec.exponent();
    let base = (r - d) * (r + d);
    let power = if exponent == 0.0 { 1.0 } else { base.powf(exponent) };
    Ok(c_n(spec.dim, spec.gamma)? * power)
}

/// χ_{|x−c|<R} / (π√(R² − |x−c|²)).
pub fn constant_xray_value(radius: f64, center: &Vector, x: &Vector) -> Result<f64> {
    if !(radius > 0.0) {
        return Err(Error::Domain(format!("radius must be positive, got {radius}")));
    }
    if center.dim() != x.dim() {
        return Err(Error::DimensionMismatch { expected: center.dim(), found: x.dim() });
    }
    let r = (*x - *center).norm();
    if r >= radius {
        return Ok(0.0);
    }
    Ok(1.0 / (PI * ((radius - r) * (radius + r)).sqrt()))
}

/// 2 sin(R|ξ|)/|ξ|, with the removable singularity filled in as 2R at |ξ| = 0.
pub fn fourier_slice_constant_radon(radius: f64, xi_norm: f64) -> Result<f64> {
    if !(radius > 0.0) || !(xi_norm >= 0.0) {
        return Err(Error::Domain(format!("need R > 0 and |ξ| ≥ 0, got R = {radius}, |ξ| = {xi_norm}")));
    }
    let z = radius * xi_norm;
    if z < 1e-4 {
        // 2R·sin(z)/z by its Taylor series.
        let z2 = z * z;
        return Ok(2.0 * radius * (1.0 - z2 / 6.0 * (1.0 - z2 / 20.0)));
    }
    Ok(2.0 * z.sin() / xi_norm)
}

/// (1/2π)·sgn(t)·χ_{|x|<|t|}·(t² − |x|²)^{−1/2} for x ∈ R².
pub fn inverse_kernel_2d(t: f64, x: &Vector) -> Result<f64> {
    x.check_dim(2)?;
    let r = x.norm();
    if r >= t.abs() {
        return Ok(0.0);
    }
    let s = t.abs();
    Ok(t.signum() / (2.0 * PI * ((s - r) * (s + r)).sqrt()))
}
