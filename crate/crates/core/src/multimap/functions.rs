use crate::error::{invalid, Result};
use crate::geometry::Point;

/// Named point-to-point functions used by single-valued lifts.
#[derive(Debug, Clone, PartialEq)]
pub enum VectorFn {
    Identity,
    /// `x ↦ k·x`
    Linear { k: f64 },
    /// `x ↦ k·x + offset`
    Affine { k: f64, offset: Point },
    /// Planar rotation by `angle` radians followed by scaling.
    Rotation { angle: f64, scale: f64 },
    /// `x ↦ scale / x` in one dimension.
    Reciprocal { scale: f64 },
}

impl VectorFn {
    /// Input dimension the function is restricted to, if any.
    pub fn required_dim(&self) -> Option<usize> {
        match self {
            VectorFn::Affine { offset, .. } => Some(offset.dim()),
            VectorFn::Rotation { .. } => Some(2),
            VectorFn::Reciprocal { .. } => Some(1),
            _ => None,
        }
    }

    pub fn apply(&self, x: &Point) -> Result<Point> {
        if let Some(d) = self.required_dim() {
            x.check_dim(d)?;
        }
        let out = match self {
            VectorFn::Identity => x.clone(),
            VectorFn::Linear { k } => x.scaled(*k),
            VectorFn::Affine { k, offset } => Point::lin_comb(*k, x, 1.0, offset),
            VectorFn::Rotation { angle, scale } => {
                let (s, c) = angle.sin_cos();
                let v = x.coords();
                Point::new(vec![scale * (c * v[0] - s * v[1]), scale * (s * v[0] + c * v[1])])?
            }
            VectorFn::Reciprocal { scale } => {
                let t = x.coords()[0];
                if t == 0.0 {
                    return invalid("reciprocal evaluated at 0");
                }
                Point::scalar(scale / t)
            }
        };
        Ok(out)
    }
}

/// Named monotone scalar functions used as interval endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalarFn {
    Constant { c: f64 },
    /// `x ↦ slope·x + intercept`
    Linear { slope: f64, intercept: f64 },
    /// `x ↦ scale / x`, monotone on either half-line.
    Reciprocal { scale: f64 },
    /// `x ↦ scale / x²`, monotone on either half-line.
    InverseSquare { scale: f64 },
}

impl ScalarFn {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            ScalarFn::Constant { c } => c,
            ScalarFn::Linear { slope, intercept } => slope * x + intercept,
            ScalarFn::Reciprocal { scale } => scale / x,
            ScalarFn::InverseSquare { scale } => scale / (x * x),
        }
    }

    /// Whether the function is finite and monotone on `[lo, hi]`.
    pub fn is_monotone_on(&self, lo: f64, hi: f64) -> bool {
        match self {
            ScalarFn::Constant { .. } | ScalarFn::Linear { .. } => true,
            ScalarFn::Reciprocal { .. } | ScalarFn::InverseSquare { .. } => lo > 0.0 || hi < 0.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vector_functions() {
        let x = Point::from([1.0, 2.0]);
        assert_eq!(VectorFn::Identity.apply(&x).unwrap(), x);
        assert_eq!(VectorFn::Linear { k: -3.0 }.apply(&x).unwrap(), Point::from([-3.0, -6.0]));
        let r = VectorFn::Rotation {
            angle: std::f64::consts::FRAC_PI_2,
            scale: 1.0,
        }
        .apply(&x)
        .unwrap();
        assert!(r.dist(&Point::from([-2.0, 1.0])) < 1e-15);
        assert!(VectorFn::Reciprocal { scale: 1.0 }.apply(&x).is_err());
        assert!(VectorFn::Reciprocal { scale: 1.0 }.apply(&Point::scalar(0.0)).is_err());
    }

    #[test]
    fn scalar_functions() {
        assert_eq!(ScalarFn::InverseSquare { scale: 1.0 }.eval(0.5), 4.0);
        assert_eq!(ScalarFn::Reciprocal { scale: 1.0 }.eval(0.5), 2.0);
        assert!(!ScalarFn::Reciprocal { scale: 1.0 }.is_monotone_on(-1.0, 1.0));
        assert!(ScalarFn::InverseSquare { scale: 1.0 }.is_monotone_on(0.5, 1.0));
    }
}
