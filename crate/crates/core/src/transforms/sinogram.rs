use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{radon, Quadrature, TestFunction};
use crate::error::{Error, Result};
use crate::geometry::{ConvexBody, Direction, Hyperplane, Slab, Vector};
use crate::quadrature::chebyshev_offsets;

/// Fewest offsets per direction accepted by the moment integrals.
pub const MIN_OFFSETS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransformKind {
    Radon,
    Xray,
}

impl TransformKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            TransformKind::Radon => "radon",
            TransformKind::Xray => "xray",
        }
    }
}

impl std::str::FromStr for TransformKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "radon" => Ok(TransformKind::Radon),
            "xray" => Ok(TransformKind::Xray),
            _ => Err(Error::Parse(format!("unknown transform '{s}'"))),
        }
    }
}

/// Provenance and grid settings carried next to the samples.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SinogramMeta {
    pub body: Option<serde_json::Value>,
    pub function: Option<serde_json::Value>,
    pub nodes: usize,
    pub angular_nodes: usize,
    pub offset_rule: String,
    /// Supporting slab per direction, when the body was known.
    pub slabs: Option<Vec<Slab>>,
}

/// Samples of a transform on a (direction, offset) grid, direction-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Sinogram {
    pub dimension: usize,
    pub transform: TransformKind,
    pub directions: Vec<Direction>,
    pub offsets: Vec<Vec<f64>>,
    pub values: Vec<Vec<f64>>,
    pub meta: SinogramMeta,
}

impl Sinogram {
    /// Checks shapes, dimensions and finiteness.
    pub fn validate(&self) -> Result<()> {
        if self.dimension != 2 && self.dimension != 3 {
            return Err(Error::UnsupportedDimension(self.dimension));
        }
        if self.directions.is_empty() {
            return Err(Error::InvalidGrid("sinogram has no directions".into()));
        }
        if self.offsets.len() != self.directions.len() || self.values.len() != self.directions.len() {
            return Err(Error::InvalidGrid("offsets/values do not match the direction count".into()));
        }
        if let Some(slabs) = &self.meta.slabs {
            if slabs.len() != self.directions.len() {
                return Err(Error::InvalidGrid("slab count does not match the direction count".into()));
            }
        }
        for (i, ((d, p), v)) in self.directions.iter().zip(&self.offsets).zip(&self.values).enumerate() {
            if d.dim() != self.dimension {
                return Err(Error::DimensionMismatch { expected: self.dimension, found: d.dim() });
            }
            if p.len() != v.len() {
                return Err(Error::InvalidGrid(format!("direction #{i}: {} offsets but {} values", p.len(), v.len())));
            }
            if let Some(bad) = v.iter().position(|x| !x.is_finite()) {
                return Err(Error::Sample {
                    direction: i,
                    offset: p[bad],
                    source: Box::new(Error::Numeric("non-finite stored value".into())),
                });
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.values.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Index of the stored direction equal to `omega` within 1e-12.
    pub fn direction_index(&self, omega: &Direction) -> Option<usize> {
        self.directions.iter().position(|d| (d.vector() - omega.vector()).norm() <= 1e-12)
    }

    /// Every sample as (direction index, offset, value), direction-major.
    pub fn samples(&self) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        self.offsets
            .iter()
            .zip(&self.values)
            .enumerate()
            .flat_map(|(i, (p, v))| p.iter().zip(v).map(move |(p, v)| (i, *p, *v)))
    }
}

#[derive(Clone, Debug)]
pub struct SinogramOptions {
    pub offsets: usize,
    pub quadrature: Quadrature,
    pub transform: TransformKind,
}

impl Default for SinogramOptions {
    fn default() -> Self {
        Self { offsets: 128, quadrature: Quadrature::default(), transform: TransformKind::Radon }
    }
}

fn check_grid(dim: usize, directions: &[Direction], offsets: usize) -> Result<()> {
    if offsets < MIN_OFFSETS {
        return Err(Error::InsufficientSamples { needed: MIN_OFFSETS, found: offsets });
    }
    if directions.is_empty() {
        return Err(Error::InvalidGrid("no directions".into()));
    }
    if let Some(d) = directions.iter().find(|d| d.dim() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, found: d.dim() });
    }
    Ok(())
}

type Table = Vec<Vec<f64>>;

/// Evaluates `eval(direction index, offset)` over Chebyshev offsets inside each slab.
///
/// The flat parallel map collects in grid order and every sample is computed
/// independently, so the result does not depend on the worker count.
fn fill<F>(directions: &[Direction], slabs: &[Slab], offsets: usize, eval: F) -> Result<(Table, Table)>
where
    F: Fn(usize, f64) -> Result<f64> + Sync,
{
    let grid: Vec<Vec<f64>> = slabs.iter().map(|s| chebyshev_offsets(s.r1, s.r2, offsets)).collect();
    let flat: Vec<f64> = (0..directions.len() * offsets)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / offsets, k % offsets);
            let p = grid[i][j];
            eval(i, p).map_err(|e| Error::Sample { direction: i, offset: p, source: Box::new(e) })
        })
        .collect::<Result<_>>()?;
    let values = flat.chunks(offsets).map(<[f64]>::to_vec).collect();
    Ok((grid, values))
}

/// Transform of `f` sampled at `opts.offsets` Chebyshev points inside the
/// supporting slab of each direction. In the plane, line (ω, p) is the line
/// {⟨x, ω⟩ = p}; the X-ray transform is only sampled in the plane.
pub fn sinogram(f: &TestFunction, directions: &[Direction], opts: &SinogramOptions) -> Result<Sinogram> {
    let dim = f.dimension();
    check_grid(dim, directions, opts.offsets)?;
    if opts.transform == TransformKind::Xray && dim != 2 {
        return Err(Error::UnsupportedDimension(dim));
    }
    let slabs = directions.iter().map(|d| f.support().slab(d)).collect::<Result<Vec<_>>>()?;
    let quad = &opts.quadrature;
    let (offsets, values) =
        fill(directions, &slabs, opts.offsets, |i, p| radon(f, &Hyperplane::new(directions[i], p), quad))?;
    Ok(Sinogram {
        dimension: dim,
        transform: opts.transform,
        directions: directions.to_vec(),
        offsets,
        values,
        meta: SinogramMeta {
            body: None,
            function: None,
            nodes: quad.nodes(),
            angular_nodes: quad.angular(),
            offset_rule: "chebyshev".into(),
            slabs: Some(slabs),
        },
    })
}

/// Data that satisfy the profile hypothesis by construction:
/// value G(min(p − r₁, r₂ − p)) at every sample.
pub fn synthetic_sinogram<G>(
    body: &ConvexBody,
    directions: &[Direction],
    offsets: usize,
    profile: G,
) -> Result<Sinogram>
where
    G: Fn(f64) -> f64 + Sync,
{
    let dim = body.dimension();
    check_grid(dim, directions, offsets)?;
    let slabs = directions.iter().map(|d| body.slab(d)).collect::<Result<Vec<_>>>()?;
    let (offsets, values) = fill(directions, &slabs, offsets, |i, p| {
        let s = &slabs[i];
        let v = profile((p - s.r1).min(s.r2 - p));
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Numeric(format!("profile returned {v}")))
        }
    })?;
    Ok(Sinogram {
        dimension: dim,
        transform: TransformKind::Radon,
        directions: directions.to_vec(),
        offsets,
        values,
        meta: SinogramMeta {
            body: None,
            function: None,
            nodes: 0,
            angular_nodes: 0,
            offset_rule: "chebyshev".into(),
            slabs: Some(slabs),
        },
    })
}

/// Quasi-uniform directions: equally spaced angles in the plane, a Fibonacci
/// lattice on the sphere. A seed adds a random angular shift (plane) or a
/// random rotation (sphere).
pub fn direction_grid(dim: usize, count: usize, seed: Option<u64>) -> Result<Vec<Direction>> {
    if count < 2 * dim {
        return Err(Error::InsufficientSamples { needed: 2 * dim, found: count });
    }
    let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
    match dim {
        2 => {
            let shift = rng.as_mut().map_or(0.0, |r| r.gen::<f64>() * TAU / count as f64);
            Ok((0..count).map(|k| Direction::from_angle(shift + TAU * k as f64 / count as f64)).collect())
        }
        3 => {
            let golden = PI * (3.0 - 5f64.sqrt());
            let rotation = rng.as_mut().map(random_rotation);
            (0..count)
                .map(|k| {
                    let z = 1.0 - (2 * k + 1) as f64 / count as f64;
                    let r = (1.0 - z * z).sqrt();
                    let phi = golden * k as f64;
                    let v = Vector::xyz(r * phi.cos(), r * phi.sin(), z);
                    let v = match &rotation {
                        Some(m) => Vector::xyz(dot3(&m[0], &v), dot3(&m[1], &v), dot3(&m[2], &v)),
                        None => v,
                    };
                    Direction::normalize(v)
                })
                .collect()
        }
        _ => Err(Error::UnsupportedDimension(dim)),
    }
}

fn dot3(row: &[f64; 3], v: &Vector) -> f64 {
    row[0] * v[0] + row[1] * v[1] + row[2] * v[2]
}

/// Uniform random rotation from a unit quaternion (Shoemake).
fn random_rotation(rng: &mut ChaCha8Rng) -> [[f64; 3]; 3] {
    let (u1, u2, u3): (f64, f64, f64) = (rng.gen(), rng.gen(), rng.gen());
    let (a, b) = ((1.0 - u1).sqrt(), u1.sqrt());
    let (w, x, y, z) = (a * (TAU * u2).sin(), a * (TAU * u2).cos(), b * (TAU * u3).sin(), b * (TAU * u3).cos());
    [
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
        [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
        [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
    ]
}
