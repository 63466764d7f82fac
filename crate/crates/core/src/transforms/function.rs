use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{BodyKind, ConvexBody, Vector};

/// Piecewise-linear radial profile φ(r) on [0, R].
#[derive(Clone, Debug, PartialEq)]
pub struct RadialTable {
    radii: Vec<f64>,
    values: Vec<f64>,
}

impl RadialTable {
    /// `radii` must start at 0 and increase strictly. Values are not checked here:
    /// a non-finite entry surfaces as a numeric error when it is integrated.
    pub fn new(radii: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if radii.len() != values.len() || radii.len() < 2 {
            return Err(Error::InvalidFunction(format!(
                "radial table needs matching radii/values of length >= 2, got {} and {}",
                radii.len(),
                values.len()
            )));
        }
        if radii[0] != 0.0 || radii.windows(2).any(|w| !(w[1] > w[0])) || radii.iter().any(|r| !r.is_finite()) {
            return Err(Error::InvalidFunction("radial table radii must start at 0 and increase".into()));
        }
        Ok(Self { radii, values })
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max_radius(&self) -> f64 {
        *self.radii.last().expect("non-empty")
    }

    pub fn eval(&self, r: f64) -> f64 {
        let k = self.radii.partition_point(|x| *x <= r);
        if k == 0 {
            return self.values[0];
        }
        if k >= self.radii.len() {
            return *self.values.last().expect("non-empty");
        }
        let (r0, r1) = (self.radii[k - 1], self.radii[k]);
        let s = (r - r0) / (r1 - r0);
        self.values[k - 1] * (1.0 - s) + self.values[k] * s
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FunctionKind {
    /// (R² − |x − c|²)^γ on B(c, R).
    GammaFamily { gamma: f64 },
    /// χ / (π√(R² − |x − c|²)) on B(c, R).
    ConstantXray,
    /// 1 on the support body.
    Indicator,
    /// φ(|x − c|) on B(c, R).
    RadialProfile(RadialTable),
}

/// A scalar function on R^n, extended by zero outside its support body.
#[derive(Clone, Debug, PartialEq)]
pub struct TestFunction {
    kind: FunctionKind,
    support: ConvexBody,
    scale: f64,
}

fn require_ball(body: &ConvexBody) -> Result<(Vector, f64)> {
    match body.kind() {
        BodyKind::Ball { center, radius } => Ok((*center, *radius)),
        _ => Err(Error::InvalidFunction("radial functions must be supported on a ball".into())),
    }
}

impl TestFunction {
    pub fn gamma_family(center: Vector, radius: f64, gamma: f64) -> Result<Self> {
        if !(gamma > -1.0) || !gamma.is_finite() {
            return Err(Error::InvalidFunction(format!("γ must exceed −1, got {gamma}")));
        }
        Ok(Self { kind: FunctionKind::GammaFamily { gamma }, support: ConvexBody::ball(center, radius)?, scale: 1.0 })
    }

    pub fn constant_xray(center: Vector, radius: f64) -> Result<Self> {
        Ok(Self { kind: FunctionKind::ConstantXray, support: ConvexBody::ball(center, radius)?, scale: 1.0 })
    }

    pub fn indicator(body: ConvexBody) -> Self {
        Self { kind: FunctionKind::Indicator, support: body, scale: 1.0 }
    }

    pub fn radial_profile(center: Vector, table: RadialTable) -> Result<Self> {
        let radius = table.max_radius();
        Ok(Self { kind: FunctionKind::RadialProfile(table), support: ConvexBody::ball(center, radius)?, scale: 1.0 })
    }

    /// Builds a function of the given kind on `body`; radial kinds require a ball.
    pub fn on_body(kind: FunctionKind, body: ConvexBody) -> Result<Self> {
        match &kind {
            FunctionKind::Indicator => {}
            FunctionKind::GammaFamily { gamma } if !(*gamma > -1.0) => {
                return Err(Error::InvalidFunction(format!("γ must exceed −1, got {gamma}")));
            }
            FunctionKind::RadialProfile(t) => {
                let (_, r) = require_ball(&body)?;
                if (t.max_radius() - r).abs() > 1e-12 * r {
                    return Err(Error::InvalidFunction(format!(
                        "radial table ends at {} but the ball radius is {r}",
                        t.max_radius()
                    )));
                }
            }
            _ => {
                require_ball(&body)?;
            }
        }
        Ok(Self { kind, support: body, scale: 1.0 })
    }

    /// λ·f for λ > 0.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidFunction(format!("scale must be positive, got {lambda}")));
        }
        Ok(Self { scale: self.scale * lambda, ..self.clone() })
    }

    /// x ↦ f(x − v).
    pub fn translated(&self, v: &Vector) -> Result<Self> {
        Ok(Self { support: self.support.translated(v)?, ..self.clone() })
    }

    pub fn kind(&self) -> &FunctionKind {
        &self.kind
    }

    pub fn support(&self) -> &ConvexBody {
        &self.support
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn dimension(&self) -> usize {
        self.support.dimension()
    }

    /// Center and radius of the support ball for radial kinds.
    pub fn radial_ball(&self) -> Option<(Vector, f64)> {
        match self.kind {
            FunctionKind::Indicator => None,
            _ => require_ball(&self.support).ok(),
        }
    }

    /// Radial kinds evaluated from the depth q = R² − r² and r². Meaningless for
    /// indicators of non-ball bodies, which return the constant scale.
    ///
    /// Passing q separately lets callers supply it without cancellation near the rim.
    pub fn radial_value(&self, depth: f64, r_sq: f64) -> f64 {
        self.scale
            * match &self.kind {
                FunctionKind::GammaFamily { gamma } => {
                    if *gamma == 0.0 {
                        1.0
                    } else {
                        depth.powf(*gamma)
                    }
                }
                FunctionKind::ConstantXray => 1.0 / (PI * depth.sqrt()),
                FunctionKind::RadialProfile(t) => t.eval(r_sq.sqrt()),
                FunctionKind::Indicator => 1.0,
            }
    }

    /// Pointwise value f(x); zero outside the (open) support.
    pub fn value(&self, x: &Vector) -> Result<f64> {
        if let Some((c, r)) = self.radial_ball() {
            x.check_dim(c.dim())?;
            let rho = (*x - c).norm();
            if rho >= r {
                return Ok(0.0);
            }
            return Ok(self.radial_value((r - rho) * (r + rho), rho * rho));
        }
        Ok(if self.support.contains(x)? { self.scale } else { 0.0 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radial_table_interpolates_linearly() {
        let t = RadialTable::new(vec![0.0, 0.5, 1.0], vec![1.0, 2.0, 4.0]).unwrap();
        assert_eq!(t.eval(0.0), 1.0);
        assert_eq!(t.eval(0.25), 1.5);
        assert_eq!(t.eval(0.75), 3.0);
        assert_eq!(t.eval(1.0), 4.0);
        assert!(RadialTable::new(vec![0.1, 1.0], vec![1.0, 1.0]).is_err());
        assert!(RadialTable::new(vec![0.0, 0.0, 1.0], vec![1.0; 3]).is_err());
        assert!(RadialTable::new(vec![0.0, 1.0], vec![1.0]).is_err());
    }

    #[test]
    fn pointwise_values() {
        let o = Vector::xy(0.0, 0.0);
        let f = TestFunction::gamma_family(o, 1.0, 1.0).unwrap();
        assert!((f.value(&Vector::xy(0.6, 0.0)).unwrap() - 0.64).abs() < 1e-15);
        assert_eq!(f.value(&Vector::xy(1.0, 0.0)).unwrap(), 0.0);
        let g = TestFunction::constant_xray(o, 1.0).unwrap().scaled(2.0).unwrap();
        assert!((g.value(&o).unwrap() - 2.0 / PI).abs() < 1e-15);
        let e = ConvexBody::ellipsoid(o, Vector::xy(1.5, 1.0)).unwrap();
        let h = TestFunction::indicator(e);
        assert_eq!(h.value(&Vector::xy(1.4, 0.3)).unwrap(), 1.0);
        assert_eq!(h.value(&Vector::xy(1.4, 0.5)).unwrap(), 0.0);
    }

    #[test]
    fn construction_errors() {
        let o = Vector::xy(0.0, 0.0);
        assert!(TestFunction::gamma_family(o, 1.0, -1.0).is_err());
        assert!(TestFunction::gamma_family(o, -1.0, 0.0).is_err());
        let e = ConvexBody::ellipsoid(o, Vector::xy(1.5, 1.0)).unwrap();
        assert!(TestFunction::on_body(FunctionKind::ConstantXray, e).is_err());
        assert!(TestFunction::constant_xray(o, 1.0).unwrap().scaled(0.0).is_err());
    }
}
