use std::sync::Arc;

use crate::catalog::{LinearScale, ScaleFactor};
use crate::error::{Error, Result};
use crate::frames::{ConstantVector, FrameField, VectorComponents};
use crate::geometry::{ChartId, MetricComponents, MetricField};
use crate::hyperdual::HyperDual;

/// Chart of the comoving coordinates `(t, x¹, x², x³)`.
pub const COMOVING_CHART: &str = "comoving";

/// `g = dt² - R(t)² Σ dxⁱ²`
#[derive(Debug, Clone)]
pub struct FriedmannMetric {
    pub scale: Arc<dyn ScaleFactor>,
}

impl MetricComponents for FriedmannMetric {
    fn components(&self, x: &[HyperDual; 4]) -> Result<[[HyperDual; 4]; 4]> {
        let r = self.scale.eval(x[0])?;
        let r2 = -(r * r);
        let mut g = [[HyperDual::ZERO; 4]; 4];
        g[0][0] = HyperDual::ONE;
        g[1][1] = r2;
        g[2][2] = r2;
        g[3][3] = r2;
        Ok(g)
    }
}

/// `Z = (R² + u²)^{1/2}/R ∂_t + u/R² ∂_x`, unit and geodesic.
#[derive(Debug, Clone)]
pub struct ZComponents {
    pub scale: Arc<dyn ScaleFactor>,
    pub u: f64,
}

impl VectorComponents for ZComponents {
    fn components(&self, x: &[HyperDual; 4]) -> Result<[HyperDual; 4]> {
        let r = self.scale.eval(x[0])?;
        let s = (r * r + self.u * self.u).sqrt();
        let ri = r.recip();
        Ok([s * ri, ri * ri * self.u, HyperDual::ZERO, HyperDual::ZERO])
    }
}

/// Spatially flat Friedmann model with the comoving frame `V` and the
/// boosted geodesic frame `Z`.
#[derive(Debug, Clone)]
pub struct FriedmannModel {
    pub scale: Arc<dyn ScaleFactor>,
    pub metric: MetricField,
    pub frame_v: FrameField,
    pub u: f64,
    pub frame_z: FrameField,
    /// Speed of `Z` relative to `V` where `R = 1`.
    pub v: f64,
}

/// `v = u/√(1+u²)`
pub fn v_from_u(u: f64) -> f64 {
    u / (1.0 + u * u).sqrt()
}

/// `u = v/√(1-v²)`
pub fn u_from_v(v: f64) -> Result<f64> {
    if !(v.abs() < 1.0) {
        return Err(Error::InvalidParameter(format!("speed v = {v} must satisfy |v| < 1")));
    }
    Ok(v / (1.0 - v * v).sqrt())
}

impl FriedmannModel {
    pub fn with_scale(scale: Arc<dyn ScaleFactor>, u: f64) -> Result<Self> {
        if !u.is_finite() {
            return Err(Error::InvalidParameter(format!("u = {u} must be finite")));
        }
        let metric = MetricField::new(
            "friedmann",
            ChartId::new(COMOVING_CHART),
            2,
            Arc::new(FriedmannMetric { scale: scale.clone() }),
        );
        let frame_v = FrameField::unit("V", Arc::new(ConstantVector([1.0, 0.0, 0.0, 0.0])), &metric);
        let frame_z = FrameField::unit("Z", Arc::new(ZComponents { scale: scale.clone(), u }), &metric);
        Ok(FriedmannModel { scale, metric, frame_v, u, frame_z, v: v_from_u(u) })
    }

    pub fn chart(&self) -> &ChartId {
        self.metric.chart()
    }
}

/// Friedmann model with `R(t) = 1 + a t` and `Z` parameter `u`.
pub fn make_friedmann(a: f64, u: f64) -> Result<FriedmannModel> {
    FriedmannModel::with_scale(Arc::new(LinearScale::new(a)?), u)
}
