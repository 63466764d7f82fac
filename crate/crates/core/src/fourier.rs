//! Numerical Fourier transforms of radial planar functions, computed independently
//! of the hyperplane integrals so they can be checked against the Fourier-slice
//! closed form.

use std::f64::consts::{FRAC_PI_4, PI};

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;
use crate::transforms::{Quadrature, TestFunction};

const SERIES_LIMIT: f64 = 17.0;

/// Bessel function of the first kind of order zero.
///
/// Power series up to |z| = 17, Hankel's asymptotic expansion beyond;
/// absolute error below 1e-9 everywhere and below 1e-13 for |z| ≤ 10.
pub fn bessel_j0(z: f64) -> f64 {
    let z = z.abs();
    if z <= SERIES_LIMIT {
        let q = -0.25 * z * z;
        let (mut term, mut sum) = (1.0, 1.0);
        let mut k = 1.0;
        loop {
            term *= q / (k * k);
            sum += term;
            if term.abs() < 1e-17 * sum.abs().max(1e-300) && k > z {
                break;
            }
            k += 1.0;
        }
        return sum;
    }
    // P ~ Σ (−1)^k b_{2k}/z^{2k}, Q ~ Σ (−1)^k b_{2k+1}/z^{2k+1},
    // b_k = Π_{j≤k}(2j−1)² / (k!·8^k).
    let (mut p, mut q) = (0.0, 0.0);
    let mut b = 1.0;
    let mut prev = f64::INFINITY;
    for k in 0..60 {
        let term = b / z.powi(k);
        if term > prev {
            break;
        }
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
        if term < 1e-17 {
            break;
        }
        prev = term;
        let next = (k + 1) as f64;
        b *= (2.0 * next - 1.0).powi(2) / (next * 8.0);
    }
    let chi = z - FRAC_PI_4;
    (2.0 / (PI * z)).sqrt() * (p * chi.cos() + q * chi.sin())
}

/// ∫ e^{−i⟨x−c, ξ⟩} f(x) dx for a radial planar function about the center c of its
/// support ball, by the Hankel reduction 2π ∫₀^R J₀(|ξ|r) φ(r) r dr with r = R sin φ.
pub fn radial_fourier_2d(f: &TestFunction, xi_norm: f64, quad: &Quadrature) -> Result<f64> {
    if f.dimension() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: f.dimension() });
    }
    let (_, radius) =
        f.radial_ball().ok_or_else(|| Error::InvalidFunction("the Hankel reduction needs a radial function".into()))?;
    let r_sq = radius * radius;
    let mut sum = 0.0;
    for (x, w) in quad.rule().pairs() {
        let phi = FRAC_PI_4 * (1.0 + x);
        let (s, c) = phi.sin_cos();
        let rc = radius * c;
        let r = radius * s;
        sum += w * bessel_j0(xi_norm * r) * f.radial_value(rc * rc, r * r) * r_sq * s * c;
    }
    let value = sum * FRAC_PI_4 * 2.0 * PI;
    if !value.is_finite() {
        return Err(Error::Numeric(format!("non-finite Fourier transform at |ξ| = {xi_norm}")));
    }
    Ok(value)
}

/// Complex value as (re, im).
pub type Complex = (f64, f64);

/// (1/2π) ∫₀^∞ J₀(kr) e^{(it − ε)k} dk: the inverse planar Fourier transform of
/// e^{−ε|ξ|}·e^{it|ξ|}/|ξ| at |x| = r.
fn damped_inverse(t: f64, r: f64, eps: f64) -> Complex {
    let rule = GaussLegendre::new(12).expect("12 > 0");
    let cutoff = 40.0 / eps;
    // Panels short compared with the fastest oscillation, |t| + r.
    let panel = 0.5 * PI / (t.abs() + r + 1.0);
    let panels = (cutoff / panel).ceil() as usize;
    let (mut re, mut im) = (0.0, 0.0);
    for j in 0..panels {
        let (a, b) = (j as f64 * panel, (j + 1) as f64 * panel);
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        for (x, w) in rule.pairs() {
            let k = mid + half * x;
            let amp = w * half * bessel_j0(k * r) * (-eps * k).exp();
            let (s, c) = (t * k).sin_cos();
            re += amp * c;
            im += amp * s;
        }
    }
    (re / (2.0 * PI), im / (2.0 * PI))
}

/// Regularized inverse planar Fourier transform of e^{it|ξ|}/|ξ| at |x| = r:
/// the damping e^{−ε|ξ|} is removed by Richardson extrapolation over ε and ε/2.
///
/// Inside the cone |x| < |t| the result is purely imaginary, with imaginary part
/// (1/2π)·sgn(t)·(t² − |x|²)^{−1/2}; that imaginary part is the inverse transform
/// of sin(t|ξ|)/|ξ|.
pub fn inverse_wave_kernel_2d(t: f64, r: f64, eps: f64) -> Result<Complex> {
    if !(eps > 0.0) || !(r >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("need ε > 0, r ≥ 0, finite t; got ε = {eps}, r = {r}, t = {t}")));
    }
    let coarse = damped_inverse(t, r, eps);
    let fine = damped_inverse(t, r, 0.5 * eps);
    Ok((2.0 * fine.0 - coarse.0, 2.0 * fine.1 - coarse.1))
}
