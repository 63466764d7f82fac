//! JSON descriptions of bodies and functions.
//!
//! Bodies: `{"dimension":2,"kind":"ball","center":[0,0],"radius":1.0}`, with kinds
//! `ball`, `ellipsoid` (`axes`), `reuleaux` (`width`, `orientation`) and
//! `support-sampled` (`directions` as unit vectors or planar angles, `h`).
//!
//! Functions: `{"kind":"gamma","gamma":1.0}`, `constant-xray`, `indicator`,
//! `radial-profile` (`radii`, `values`) and `synthetic-g` (`value`), each with an
//! optional positive `scale`. The short forms `constant-xray`, `indicator`,
//! `synthetic-g` and `gamma:<γ>` are accepted too.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ConvexBody, Direction, Vector};
use crate::transforms::{sinogram, synthetic_sinogram, RadialTable, Sinogram, SinogramOptions, TestFunction};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BodySpec {
    pub dimension: usize,
    #[serde(flatten)]
    pub shape: ShapeSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DirectionEntry {
    Angle(f64),
    Vector(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ShapeSpec {
    Ball {
        #[serde(default)]
        center: Option<Vec<f64>>,
        radius: f64,
    },
    Ellipsoid {
        #[serde(default)]
        center: Option<Vec<f64>>,
        #[serde(alias = "semi_axes", alias = "semi-axes")]
        axes: Vec<f64>,
    },
    Reuleaux {
        #[serde(default)]
        center: Option<Vec<f64>>,
        width: f64,
        #[serde(default)]
        orientation: f64,
    },
    SupportSampled {
        directions: Vec<DirectionEntry>,
        h: Vec<f64>,
    },
}

fn point(dim: usize, v: &Option<Vec<f64>>, what: &str) -> Result<Vector> {
    match v {
        None => Vector::zeros(dim),
        Some(c) if c.len() == dim => Vector::new(c),
        Some(c) => Err(Error::InvalidBody(format!("{what} has {} components, dimension is {dim}", c.len()))),
    }
}

impl BodySpec {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("body: {e}")))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("body specs serialize")
    }

    pub fn build(&self) -> Result<ConvexBody> {
        let dim = self.dimension;
        if dim != 2 && dim != 3 {
            return Err(Error::UnsupportedDimension(dim));
        }
        match &self.shape {
            ShapeSpec::Ball { center, radius } => ConvexBody::ball(point(dim, center, "center")?, *radius),
            ShapeSpec::Ellipsoid { center, axes } => {
                ConvexBody::ellipsoid(point(dim, center, "center")?, point(dim, &Some(axes.clone()), "axes")?)
            }
            ShapeSpec::Reuleaux { center, width, orientation } => {
                if dim != 2 {
                    return Err(Error::InvalidBody("the Reuleaux triangle is planar".into()));
                }
                ConvexBody::reuleaux(point(2, center, "center")?, *width, *orientation)
            }
            ShapeSpec::SupportSampled { directions, h } => {
                let dirs = directions
                    .iter()
                    .map(|d| match d {
                        DirectionEntry::Angle(t) if dim == 2 => Ok(Direction::from_angle(*t)),
                        DirectionEntry::Angle(_) => {
                            Err(Error::InvalidBody("angles describe planar directions only".into()))
                        }
                        DirectionEntry::Vector(v) if v.len() == dim => Direction::normalize(Vector::new(v)?),
                        DirectionEntry::Vector(v) => Err(Error::DimensionMismatch { expected: dim, found: v.len() }),
                    })
                    .collect::<Result<Vec<_>>>()?;
                ConvexBody::support_sampled(dirs, h.clone())
            }
        }
    }
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FunctionSpec {
    #[serde(alias = "gamma-family")]
    Gamma {
        gamma: f64,
        #[serde(default = "one")]
        scale: f64,
    },
    ConstantXray {
        #[serde(default = "one")]
        scale: f64,
    },
    Indicator {
        #[serde(default = "one")]
        scale: f64,
    },
    RadialProfile {
        radii: Vec<f64>,
        values: Vec<f64>,
        #[serde(default = "one")]
        scale: f64,
    },
    /// Samples G(s) ≡ value directly, without an underlying function.
    SyntheticG {
        #[serde(default = "one")]
        value: f64,
    },
}

/// What a function spec turns into on a given body.
#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum Phantom {
    Function(TestFunction),
    Synthetic { value: f64 },
}

impl FunctionSpec {
    /// JSON, or one of the short forms.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.starts_with('{') {
            return serde_json::from_str(t).map_err(|e| Error::Parse(format!("function: {e}")));
        }
        match t {
            "constant-xray" => Ok(FunctionSpec::ConstantXray { scale: 1.0 }),
            "indicator" => Ok(FunctionSpec::Indicator { scale: 1.0 }),
            "synthetic-g" => Ok(FunctionSpec::SyntheticG { value: 1.0 }),
            _ => {
                let gamma = t
                    .strip_prefix("gamma:")
                    .or_else(|| t.strip_prefix("gamma="))
                    .ok_or_else(|| Error::Parse(format!("unknown function '{t}'")))?;
                let gamma = gamma.parse().map_err(|_| Error::Parse(format!("bad γ in '{t}'")))?;
                Ok(FunctionSpec::Gamma { gamma, scale: 1.0 })
            }
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("function specs serialize")
    }

    pub fn build(&self, body: &ConvexBody) -> Result<Phantom> {
        use crate::transforms::FunctionKind as K;
        let (kind, scale) = match self {
            FunctionSpec::Gamma { gamma, scale } => (K::GammaFamily { gamma: *gamma }, *scale),
            FunctionSpec::ConstantXray { scale } => (K::ConstantXray, *scale),
            FunctionSpec::Indicator { scale } => (K::Indicator, *scale),
            FunctionSpec::RadialProfile { radii, values, scale } => {
                (K::RadialProfile(RadialTable::new(radii.clone(), values.clone())?), *scale)
            }
            FunctionSpec::SyntheticG { value } => {
                if !value.is_finite() {
                    return Err(Error::InvalidFunction(format!("synthetic value {value}")));
                }
                return Ok(Phantom::Synthetic { value: *value });
            }
        };
        Ok(Phantom::Function(TestFunction::on_body(kind, body.clone())?.scaled(scale)?))
    }
}

/// Sinogram of the phantom described by the two specs, with the specs recorded
/// in its metadata.
pub fn build_sinogram(
    body: &BodySpec,
    function: &FunctionSpec,
    directions: &[Direction],
    opts: &SinogramOptions,
) -> Result<Sinogram> {
    let shape = body.build()?;
    let mut sino = match function.build(&shape)? {
        Phantom::Function(f) => sinogram(&f, directions, opts)?,
        Phantom::Synthetic { value } => synthetic_sinogram(&shape, directions, opts.offsets, move |_| value)?,
    };
    sino.meta.body = Some(body.to_json());
    sino.meta.function = Some(function.to_json());
    Ok(sino)
}
