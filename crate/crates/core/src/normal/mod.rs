//! Local Lorentz charts: Riemann normal coordinates at a point and tube
//! coordinates along a geodesic, with the frames `∂/∂ξ⁰` they define.

mod fermi;
mod point;

use std::sync::Arc;

use crate::error::Result;
use crate::frames::{FrameField, VectorComponents};
use crate::geometry::{ChartMap, MetricField};
use crate::hyperdual::HyperDual;

pub use fermi::{
    llrf_along_geodesic, llrf_along_geodesic_with_radius, llrf_decomposition, llrf_expansion, FermiChart, LLRFFrame,
    LlrfExpansion,
};
pub use point::{build_normal_chart, NormalChart, NormalChartCheck, NormalChartRecord, DEFAULT_VALIDITY_RADIUS};

/// A chart whose inverse map has a computable `∂x/∂y⁰`.
pub trait TimeTangent: ChartMap {
    /// `∂x/∂y⁰` in source components, as a function of target coordinates.
    fn time_tangent_jet(&self, y: &[HyperDual; 4]) -> Result<[HyperDual; 4]>;
}

/// The coordinate field `∂/∂y⁰` of a chart, expressed in its source chart.
#[derive(Debug)]
pub struct CoordinateTimeField<M: TimeTangent> {
    pub chart: Arc<M>,
}

impl<M: TimeTangent + 'static> VectorComponents for CoordinateTimeField<M> {
    fn components(&self, x: &[HyperDual; 4]) -> Result<[HyperDual; 4]> {
        let y = self.chart.forward_jet(x)?;
        self.chart.time_tangent_jet(&y)
    }
}

/// `∂/∂ξ⁰` of a normal chart, normalized pointwise.
pub fn normal_time_frame(metric: &MetricField, chart: Arc<NormalChart>, label: &str) -> FrameField {
    FrameField::normalized(label, Arc::new(CoordinateTimeField { chart }), metric)
}
