use std::sync::Arc;

use crate::error::{Error, Result};
use crate::frames::{ConstantVector, FrameField, VectorComponents};
use crate::geometry::{ChartId, ConstantMetric, MetricField};
use crate::hyperdual::HyperDual;
use crate::tensor::ETA;

pub const INERTIAL_CHART: &str = "inertial";

/// `η = diag(1, -1, -1, -1)` in an inertial chart.
pub fn minkowski() -> MetricField {
    MetricField::new("minkowski", ChartId::new(INERTIAL_CHART), 2, Arc::new(ConstantMetric(ETA)))
}

/// `I = ∂_t`
pub fn inertial_frame(metric: &MetricField) -> FrameField {
    FrameField::unit("I", Arc::new(ConstantVector([1.0, 0.0, 0.0, 0.0])), metric)
}

/// Inertial observers moving with speed `v` along `x¹`.
pub fn boosted_inertial_frame(metric: &MetricField, v: f64) -> Result<FrameField> {
    if !(v.abs() < 1.0) {
        return Err(Error::InvalidParameter(format!("boost speed {v} must satisfy |v| < 1")));
    }
    let g = 1.0 / (1.0 - v * v).sqrt();
    Ok(FrameField::unit("I'", Arc::new(ConstantVector([g, g * v, 0.0, 0.0])), metric))
}

/// `∂_t + ω(x ∂_y - y ∂_x)` on `x² + y² < radius_cap²`, before normalization.
#[derive(Debug, Clone)]
pub struct RotatingComponents {
    pub omega: f64,
    pub radius_cap: f64,
}

impl VectorComponents for RotatingComponents {
    fn components(&self, x: &[HyperDual; 4]) -> Result<[HyperDual; 4]> {
        let r2 = x[1].re * x[1].re + x[2].re * x[2].re;
        if r2 >= self.radius_cap * self.radius_cap {
            return Err(Error::Domain(format!(
                "rotating frame evaluated at r = {} outside radius cap {}",
                r2.sqrt(),
                self.radius_cap
            )));
        }
        Ok([HyperDual::ONE, -(x[2] * self.omega), x[1] * self.omega, HyperDual::ZERO])
    }
}

/// Uniformly rotating observers, normalized to unit length.
pub fn rotating_minkowski_frame(omega: f64, radius_cap: f64) -> Result<FrameField> {
    if !(radius_cap > 0.0) || !omega.is_finite() || !radius_cap.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "bad rotating frame parameters omega = {omega}, cap = {radius_cap}"
        )));
    }
    if omega.abs() * radius_cap >= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "radius cap {radius_cap} reaches the light cylinder r = {}",
            1.0 / omega.abs()
        )));
    }
    Ok(FrameField::normalized("rotating", Arc::new(RotatingComponents { omega, radius_cap }), &minkowski()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::kinematic_decompose;

    #[test]
    fn rotating_frame_domain() {
        assert!(rotating_minkowski_frame(0.5, 2.0).is_err());
        assert!(rotating_minkowski_frame(0.1, 0.0).is_err());
        let f = rotating_minkowski_frame(0.1, 5.0).unwrap();
        let m = minkowski();
        assert!(matches!(f.eval(&m.point([0.0, 6.0, 0.0, 0.0]).unwrap()), Err(Error::Domain(_))));
        let q = f.eval(&m.point([0.0, 1.0, 0.0, 0.0]).unwrap()).unwrap();
        let g = 1.0 / (1.0f64 - 0.01).sqrt();
        assert!((q[0] - g).abs() < 1e-14 && (q[2] - 0.1 * g).abs() < 1e-14);
    }

    #[test]
    fn zero_omega_is_inertial() {
        let f = rotating_minkowski_frame(0.0, 10.0).unwrap();
        let m = minkowski();
        let p = m.point([1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(f.eval(&p).unwrap(), [1.0, 0.0, 0.0, 0.0]);
        let k = kinematic_decompose(&m, &f, &p).unwrap();
        assert_eq!(k.vorticity_scalar(), 0.0);
    }

    #[test]
    fn boosted_frame_is_unit() {
        let m = minkowski();
        let f = boosted_inertial_frame(&m, 0.6).unwrap();
        assert!(f.unit_defect(&m.point([0.0; 4]).unwrap()).unwrap().abs() < 1e-15);
        assert!(boosted_inertial_frame(&m, -1.0).is_err());
    }
}
