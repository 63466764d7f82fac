//! Quadrature rules: Gauss–Legendre for transform integrals, Fejér's first
//! (interior Chebyshev) rule for integrals over sinogram offsets.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Gauss–Legendre nodes and weights on [−1, 1], nodes ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGrid("Gauss-Legendre rule needs at least one node".into()));
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi's initial guess, then Newton on P_n.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[n - 1 - i] = x;
            nodes[i] = -x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Iterator over (node, weight) pairs on [−1, 1].
    pub fn pairs(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// ∫_a^b f(x) dx.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        self.pairs().map(|(x, w)| w * f(mid + half * x)).sum::<f64>() * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let prev = if n == 0 { 0.0 } else { p0 };
    let d = n as f64 * (x * p - prev) / (x * x - 1.0);
    (p, d)
}

/// The 64-node rule used by default, computed once.
pub fn default_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(64).expect("64 > 0"))
}

/// Interior Chebyshev points −cos((2k+1)π/2n) on [−1, 1], ascending, with the
/// weights of Fejér's first rule (Clenshaw–Curtis on the open Chebyshev grid).
pub fn fejer_first(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for k in 0..n {
        let theta = (2 * k + 1) as f64 * PI / (2 * n) as f64;
        let series: f64 = (1..=n / 2).map(|j| (2.0 * j as f64 * theta).cos() / (4.0 * (j * j) as f64 - 1.0)).sum();
        nodes.push(-theta.cos());
        weights.push(2.0 / n as f64 * (1.0 - 2.0 * series));
    }
    (nodes, weights)
}

/// The n interior Chebyshev points of [a, b], ascending.
pub fn chebyshev_offsets(a: f64, b: f64, n: usize) -> Vec<f64> {
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    fejer_first(n).0.into_iter().map(|x| mid + half * x).collect()
}

/// If `offsets` is the interior Chebyshev grid of some interval [a, b],
/// returns that interval.
pub fn detect_chebyshev_interval(offsets: &[f64]) -> Option<(f64, f64)> {
    let n = offsets.len();
    if n < 2 {
        return None;
    }
    let c = (PI / (2 * n) as f64).cos();
    let (lo, hi) = (offsets[0], offsets[n - 1]);
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo) / c;
    if !(half > 0.0) {
        return None;
    }
    let expected = chebyshev_offsets(mid - half, mid + half, n);
    let tol = 1e-9 * half.max(mid.abs());
    expected.iter().zip(offsets).all(|(e, o)| (e - o).abs() <= tol).then_some((mid - half, mid + half))
}

/// Fejér weights for `offsets`, which must form an interior Chebyshev grid.
pub fn offset_weights(offsets: &[f64]) -> Result<Vec<f64>> {
    let (a, b) = detect_chebyshev_interval(offsets)
        .ok_or_else(|| Error::InvalidGrid("offsets do not form an interior Chebyshev grid".into()))?;
    let half = 0.5 * (b - a);
    Ok(fejer_first(offsets.len()).1.into_iter().map(|w| w * half).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        for n in [1usize, 2, 5, 16, 64, 128] {
            let rule = GaussLegendre::new(n).unwrap();
            assert!((rule.weights().iter().sum::<f64>() - 2.0).abs() < 1e-13);
            for deg in 0..(2 * n).min(40) {
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg + 1) as f64 };
                let got: f64 = rule.pairs().map(|(x, w)| w * x.powi(deg as i32)).sum();
                assert!((got - exact).abs() < 1e-13, "n={n} deg={deg}: {got} vs {exact}");
            }
        }
    }

    #[test]
    fn gauss_legendre_known_nodes() {
        let r = GaussLegendre::new(2).unwrap();
        assert!((r.nodes()[1] - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        let r = GaussLegendre::new(3).unwrap();
        assert_eq!(r.nodes()[1], 0.0);
        assert!((r.weights()[1] - 8.0 / 9.0).abs() < 1e-15);
        assert!(r.nodes().windows(2).all(|w| w[0] < w[1]));
        assert!(GaussLegendre::new(0).is_err());
    }

    #[test]
    fn fejer_rule_integrates_polynomials_exactly() {
        let n = 20;
        let (x, w) = fejer_first(n);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
        for deg in 0..n {
            let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg + 1) as f64 };
            let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
            assert!((got - exact).abs() < 1e-14, "deg={deg}");
        }
    }

    #[test]
    fn chebyshev_interval_round_trips() {
        let offs = chebyshev_offsets(-1.2, 0.8, 128);
        let (a, b) = detect_chebyshev_interval(&offs).unwrap();
        assert!((a + 1.2).abs() < 1e-14 && (b - 0.8).abs() < 1e-14);
        let uniform: Vec<f64> = (0..16).map(|k| k as f64).collect();
        assert!(detect_chebyshev_interval(&uniform).is_none());
        assert!(offset_weights(&uniform).is_err());
        let w = offset_weights(&offs).unwrap();
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
    }
}
