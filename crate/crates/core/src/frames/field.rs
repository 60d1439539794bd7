use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{ChartId, ChartPoint, MetricField};
use crate::hyperdual::HyperDual;
use crate::tensor::{inner, Mat4, Vec4};

/// Contravariant components `Q^μ` of a vector field, jet-evaluable.
pub trait VectorComponents: Send + Sync + fmt::Debug {
    fn components(&self, x: &[HyperDual; 4]) -> Result<[HyperDual; 4]>;
}

/// Unit-norm tolerance for frames.
pub const UNIT_TOLERANCE: f64 = 1e-10;

/// A unit timelike, future-pointing vector field in a chart.
#[derive(Clone)]
pub struct FrameField {
    label: String,
    metric: MetricField,
    source: Arc<dyn VectorComponents>,
    rescaled: bool,
}

impl fmt::Debug for FrameField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FrameField")
            .field("label", &self.label)
            .field("chart", self.metric.chart())
            .field("rescaled", &self.rescaled)
            .finish()
    }
}

/// `α_μ = g_{μν} Q^ν` at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Coframe {
    pub components: Vec4,
}

impl Coframe {
    pub fn apply(&self, v: &Vec4) -> f64 {
        (0..4).map(|i| self.components[i] * v[i]).sum()
    }
}

/// Build a frame from raw components, checking it on `samples`.
///
/// Spacelike or null vectors at any sample are rejected. If the field is not
/// unit at some sample it is rescaled by `1/√g(Q,Q)` everywhere and the
/// frame remembers that it was.
pub fn make_frame(
    label: impl Into<String>,
    components: Arc<dyn VectorComponents>,
    metric: &MetricField,
    samples: &[ChartPoint],
) -> Result<FrameField> {
    let label = label.into();
    let mut rescaled = false;
    for p in samples {
        p.expect_chart(metric.chart())?;
        let q = HyperDual::values(&components.components(&HyperDual::constants(p.coords))?);
        let g = metric.eval(p)?;
        let norm = inner(&g, &q, &q);
        if !(norm > 0.0) || q[0] <= 0.0 {
            return Err(Error::NotTimelike { point: p.coords, norm });
        }
        if (norm - 1.0).abs() > 1e-12 {
            rescaled = true;
        }
    }
    Ok(FrameField { label, metric: metric.clone(), source: components, rescaled })
}

impl FrameField {
    /// Frame whose components are known to be unit; no rescaling applied.
    pub fn unit(label: impl Into<String>, components: Arc<dyn VectorComponents>, metric: &MetricField) -> Self {
        FrameField { label: label.into(), metric: metric.clone(), source: components, rescaled: false }
    }

    /// Frame normalized pointwise regardless of sampling.
    pub fn normalized(label: impl Into<String>, components: Arc<dyn VectorComponents>, metric: &MetricField) -> Self {
        FrameField { label: label.into(), metric: metric.clone(), source: components, rescaled: true }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn chart(&self) -> &ChartId {
        self.metric.chart()
    }

    pub fn metric(&self) -> &MetricField {
        &self.metric
    }

    pub fn rescaled(&self) -> bool {
        self.rescaled
    }

    pub fn source(&self) -> &Arc<dyn VectorComponents> {
        &self.source
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Components on jets, normalized when the frame was rescaled.
    pub fn components_jet(&self, x: &[HyperDual; 4]) -> Result<[HyperDual; 4]> {
        let q = self.source.components(x)?;
        if !self.rescaled {
            return Ok(q);
        }
        let g = self.metric.components_jet(x)?;
        let mut n = HyperDual::ZERO;
        for i in 0..4 {
            for j in 0..4 {
                n += g[i][j] * q[i] * q[j];
            }
        }
        if !(n.re > 0.0) {
            return Err(Error::NotTimelike { point: HyperDual::values(x), norm: n.re });
        }
        let scale = n.sqrt().recip();
        Ok(q.map(|c| c * scale))
    }

    /// `Q^μ(p)`, checked timelike and future-pointing.
    pub fn eval(&self, p: &ChartPoint) -> Result<Vec4> {
        p.expect_chart(self.chart())?;
        let q = HyperDual::values(&self.components_jet(&HyperDual::constants(p.coords))?);
        let g = self.metric.eval(p)?;
        let norm = inner(&g, &q, &q);
        if !(norm > 0.0) || q[0] <= 0.0 {
            return Err(Error::NotTimelike { point: p.coords, norm });
        }
        Ok(q)
    }

    /// `(Q^μ, ∂_ν Q^μ)` at `p`; the matrix is indexed `[μ][ν]`.
    pub fn derivative(&self, p: &ChartPoint) -> Result<(Vec4, Mat4)> {
        p.expect_chart(self.chart())?;
        let q = self.components_jet(&HyperDual::seed(p.coords))?;
        let values = HyperDual::values(&q);
        let g = self.metric.eval(p)?;
        let norm = inner(&g, &values, &values);
        if !(norm > 0.0) || values[0] <= 0.0 {
            return Err(Error::NotTimelike { point: p.coords, norm });
        }
        Ok((values, std::array::from_fn(|m| q[m].grad)))
    }

    /// `g(Q,Q) - 1` at `p`.
    pub fn unit_defect(&self, p: &ChartPoint) -> Result<f64> {
        let q = self.eval(p)?;
        Ok(inner(&self.metric.eval(p)?, &q, &q) - 1.0)
    }

    pub fn coframe(&self, p: &ChartPoint) -> Result<Coframe> {
        let q = self.eval(p)?;
        let g = self.metric.eval(p)?;
        Ok(Coframe { components: crate::tensor::lower(&g, &q) })
    }

    /// Same components without the pointwise normalization.
    pub fn unnormalized(&self) -> FrameField {
        FrameField { rescaled: false, ..self.clone() }
    }
}

/// Components independent of position.
#[derive(Debug, Clone)]
pub struct ConstantVector(pub Vec4);

impl VectorComponents for ConstantVector {
    fn components(&self, _x: &[HyperDual; 4]) -> Result<[HyperDual; 4]> {
        Ok(self.0.map(HyperDual::constant))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::minkowski;

    #[test]
    fn non_unit_input_is_rescaled_and_flagged() {
        let m = minkowski();
        let p = m.point([0.0; 4]).unwrap();
        let f =
            make_frame("2dt", Arc::new(ConstantVector([2.0, 0.0, 0.0, 0.0])), &m, std::slice::from_ref(&p)).unwrap();
        assert!(f.rescaled());
        assert_eq!(f.eval(&p).unwrap(), [1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn unit_input_is_not_flagged() {
        let m = minkowski();
        let p = m.point([0.3, 1.0, 0.0, 0.0]).unwrap();
        let f = make_frame("I", Arc::new(ConstantVector([1.0, 0.0, 0.0, 0.0])), &m, &[p]).unwrap();
        assert!(!f.rescaled());
    }

    #[test]
    fn spacelike_and_null_are_rejected() {
        let m = minkowski();
        let p = m.point([0.0; 4]).unwrap();
        for q in [[0.0, 1.0, 0.0, 0.0], [1.0, 1.0, 0.0, 0.0], [-1.0, 0.0, 0.0, 0.0]] {
            let r = make_frame("bad", Arc::new(ConstantVector(q)), &m, std::slice::from_ref(&p));
            assert!(matches!(r, Err(Error::NotTimelike { .. })), "{q:?}");
        }
    }
}
