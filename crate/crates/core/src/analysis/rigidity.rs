use serde::{Deserialize, Serialize};

use super::{moment_report, MomentReport};
use crate::error::{Error, Result};
use crate::geometry::{Slab, Vector};
use crate::quadrature::detect_chebyshev_interval;
use crate::transforms::Sinogram;

pub const DEFAULT_BINS: usize = 64;

/// Pass thresholds for the rigidity checks.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative spread of K over directions.
    pub k_spread: f64,
    /// Linear-fit residual in units of K·diameter.
    pub linearity: f64,
    /// |r₁ + r₂ − 2⟨ĉ, ω⟩| in units of the mean width.
    pub center: f64,
    /// Width deviation in units of the mean width.
    pub width: f64,
    /// Profile scatter in units of (bin mean + collapse_floor·max |G|).
    pub collapse: f64,
    pub collapse_floor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { k_spread: 1e-6, linearity: 1e-6, center: 1e-6, width: 1e-6, collapse: 1e-4, collapse_floor: 1e-3 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WidthCheck {
    pub w_mean: f64,
    pub max_dev: f64,
    pub pass: bool,
}

/// Mean width and largest deviation from it; passes iff max_dev ≤ tol·w_mean.
pub fn constant_width_check(slabs: &[Slab], tol: f64) -> Result<WidthCheck> {
    if slabs.is_empty() {
        return Err(Error::InsufficientSamples { needed: 1, found: 0 });
    }
    let w_mean = slabs.iter().map(Slab::width).sum::<f64>() / slabs.len() as f64;
    let max_dev = slabs.iter().map(|s| (s.width() - w_mean).abs()).fold(0.0, f64::max);
    Ok(WidthCheck { w_mean, max_dev, pass: max_dev <= tol * w_mean })
}

/// Sinogram values rebinned by distance to the nearer supporting plane.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GProfile {
    pub centers: Vec<f64>,
    /// Mean value per bin; `None` for empty bins.
    pub values: Vec<Option<f64>>,
    /// Largest deviation per bin from the reference profile of the first direction.
    pub scatter: Vec<Option<f64>>,
    pub counts: Vec<usize>,
}

impl GProfile {
    pub fn empty_bins(&self) -> usize {
        self.counts.iter().filter(|c| **c == 0).count()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// max over bins of scatter / (|mean| + floor·max |G|).
    pub fn normalized_scatter(&self, floor: f64) -> f64 {
        let base = floor * self.max_abs();
        self.values
            .iter()
            .zip(&self.scatter)
            .filter_map(|(v, s)| Some(s.as_ref()? / (v.as_ref()?.abs() + base)))
            .fold(0.0, f64::max)
    }
}

fn interpolate(table: &[(f64, f64)], s: f64) -> f64 {
    let k = table.partition_point(|(x, _)| *x <= s);
    if k == 0 {
        return table[0].1;
    }
    if k == table.len() {
        return table[k - 1].1;
    }
    let ((x0, y0), (x1, y1)) = (table[k - 1], table[k]);
    if x1 == x0 {
        return y0;
    }
    y0 + (y1 - y0) * (s - x0) / (x1 - x0)
}

/// Rebins every sample (ω, p, v) by s = min(p − r₁(ω), r₂(ω) − p) into `bins`
/// uniform bins over [0, w̄/2].
///
/// Bin scatter is measured against the first direction's samples on the near
/// half of its slab, interpolated linearly in s. Directions of equal width share
/// the same s values on a Chebyshev grid, so the interpolation is then exact and
/// any scatter comes from the data.
pub fn g_profile_collapse(sino: &Sinogram, slabs: &[Slab], bins: usize) -> Result<GProfile> {
    if bins == 0 {
        return Err(Error::InvalidGrid("need at least one bin".into()));
    }
    if slabs.len() != sino.directions.len() {
        return Err(Error::InvalidGrid(format!("{} slabs for {} directions", slabs.len(), sino.directions.len())));
    }
    let w_mean = constant_width_check(slabs, 0.0)?.w_mean;
    let top = 0.5 * w_mean;
    let dist = |i: usize, p: f64| (p - slabs[i].r1).min(slabs[i].r2 - p);

    let mid = slabs[0].mid();
    let mut reference: Vec<(f64, f64)> = sino.offsets[0]
        .iter()
        .zip(&sino.values[0])
        .filter(|(p, _)| **p <= mid)
        .map(|(p, v)| (dist(0, *p), *v))
        .collect();
    if reference.is_empty() {
        return Err(Error::InsufficientSamples { needed: 1, found: 0 });
    }
    reference.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut sum = vec![0.0; bins];
    let mut counts = vec![0usize; bins];
    let mut scatter = vec![0.0f64; bins];
    for (i, p, v) in sino.samples() {
        let s = dist(i, p);
        let b = ((s / top * bins as f64).floor().max(0.0) as usize).min(bins - 1);
        sum[b] += v;
        counts[b] += 1;
        scatter[b] = scatter[b].max((v - interpolate(&reference, s)).abs());
    }
    let width = top / bins as f64;
    Ok(GProfile {
        centers: (0..bins).map(|b| (b as f64 + 0.5) * width).collect(),
        values: sum.iter().zip(&counts).map(|(s, c)| (*c > 0).then(|| s / *c as f64)).collect(),
        scatter: scatter.iter().zip(&counts).map(|(s, c)| (*c > 0).then_some(*s)).collect(),
        counts,
    })
}

/// Supporting slabs recovered from the samples alone: the interval whose interior
/// Chebyshev grid the offsets form, or else the offset range over which the
/// values exceed 1e-9 of their maximum.
pub fn estimate_slabs(sino: &Sinogram) -> Result<Vec<Slab>> {
    sino.offsets
        .iter()
        .zip(&sino.values)
        .enumerate()
        .map(|(i, (p, v))| {
            if let Some((a, b)) = detect_chebyshev_interval(p) {
                return Slab::new(a, b);
            }
            let peak = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let above = |x: &f64| x.abs() > 1e-9 * peak;
            match (v.iter().position(above), v.iter().rposition(above)) {
                (Some(lo), Some(hi)) if hi > lo => Slab::new(p[lo], p[hi]),
                _ => Err(Error::Sample {
                    direction: i,
                    offset: p.first().copied().unwrap_or(f64::NAN),
                    source: Box::new(Error::InvalidGrid("cannot locate the support of the profile".into())),
                }),
            }
        })
        .collect()
}

/// Slabs stored with the sinogram, or estimated from its samples.
pub fn sinogram_slabs(sino: &Sinogram) -> Result<Vec<Slab>> {
    match &sino.meta.slabs {
        Some(s) => Ok(s.clone()),
        None => estimate_slabs(sino),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Check {
    pub pass: bool,
    pub value: f64,
    pub tolerance: f64,
}

impl Check {
    fn new(value: f64, tolerance: f64) -> Self {
        Self { pass: value <= tolerance, value, tolerance }
    }
}

/// The checks in the order they are run.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct Checks {
    pub k_constancy: Check,
    pub g_linearity: Check,
    pub centered_slab: Check,
    pub constant_width: Check,
    pub g_collapse: Check,
}

impl Checks {
    pub fn named(&self) -> [(&'static str, &Check); 5] {
        [
            ("k-constancy", &self.k_constancy),
            ("g-linearity", &self.g_linearity),
            ("centered-slab", &self.centered_slab),
            ("constant-width", &self.constant_width),
            ("g-collapse", &self.g_collapse),
        ]
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.named().iter().filter(|(_, c)| !c.pass).map(|(n, _)| *n).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Estimates {
    pub center: Vector,
    pub radius: f64,
    pub k_mean: f64,
    pub g_profile: GProfile,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Ball,
    Obstruction,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RigidityReport {
    pub checks: Checks,
    pub estimates: Estimates,
    pub verdict: Verdict,
    /// First failing check, in run order.
    pub obstruction: Option<String>,
    pub failures: Vec<String>,
    pub moments: MomentReport,
}

impl RigidityReport {
    pub fn is_ball(&self) -> bool {
        self.verdict == Verdict::Ball
    }

    pub fn failed(&self, name: &str) -> bool {
        self.failures.iter().any(|f| f == name)
    }
}

/// Runs K-constancy, g-linearity, centered slabs, constant width and profile
/// collapse. Every check is evaluated; the verdict is a ball only if all pass,
/// and otherwise names the first failure.
pub fn rigidity_check(sino: &Sinogram, slabs: &[Slab], tol: &Tolerances, bins: usize) -> Result<RigidityReport> {
    let moments = moment_report(sino, slabs)?;
    let width = constant_width_check(slabs, tol.width)?;
    let center = moments.center;
    let centered =
        sino.directions.iter().zip(slabs).map(|(d, s)| (s.r1 + s.r2 - 2.0 * d.dot(&center)).abs()).fold(0.0, f64::max)
            / width.w_mean;
    let profile = g_profile_collapse(sino, slabs, bins)?;
    let checks = Checks {
        k_constancy: Check::new(moments.k_spread, tol.k_spread),
        g_linearity: Check::new(moments.residual, tol.linearity),
        centered_slab: Check::new(centered, tol.center),
        constant_width: Check::new(width.max_dev / width.w_mean, tol.width),
        g_collapse: Check::new(profile.normalized_scatter(tol.collapse_floor), tol.collapse),
    };
    let failures: Vec<String> = checks.failures().into_iter().map(String::from).collect();
    let radius = 0.5 * width.w_mean;
    let verdict = if failures.is_empty() && radius > 0.0 { Verdict::Ball } else { Verdict::Obstruction };
    Ok(RigidityReport {
        checks,
        estimates: Estimates { center, radius, k_mean: moments.k_mean, g_profile: profile },
        verdict,
        obstruction: failures.first().cloned(),
        failures,
        moments,
    })
}
