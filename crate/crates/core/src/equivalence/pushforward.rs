use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frames::{FrameField, VectorComponents};
use crate::geometry::{compose_taylor, inverse_jacobian_jets, ChartId, ChartMap, ChartPoint, MetricField};
use crate::hyperdual::HyperDual;
use crate::tensor::{invert, mat_mul, Mat4, Tensor, Vec4};

/// Default agreement threshold for [`is_symmetry`].
pub const SYMMETRY_TOLERANCE: f64 = 1e-9;

/// A tensor field given by components in one chart.
pub trait TensorField: Send + Sync {
    fn chart(&self) -> &ChartId;
    /// `(r, s)`
    fn valence(&self) -> (usize, usize);
    fn eval(&self, p: &ChartPoint) -> Result<Tensor>;
}

impl TensorField for MetricField {
    fn chart(&self) -> &ChartId {
        MetricField::chart(self)
    }

    fn valence(&self) -> (usize, usize) {
        (0, 2)
    }

    fn eval(&self, p: &ChartPoint) -> Result<Tensor> {
        Ok(Tensor::bilinear(&MetricField::eval(self, p)?))
    }
}

impl TensorField for FrameField {
    fn chart(&self) -> &ChartId {
        FrameField::chart(self)
    }

    fn valence(&self) -> (usize, usize) {
        (1, 0)
    }

    fn eval(&self, p: &ChartPoint) -> Result<Tensor> {
        Ok(Tensor::vector(FrameField::eval(self, p)?))
    }
}

/// The zero field of any valence.
#[derive(Debug, Clone)]
pub struct ZeroTensor {
    pub chart: ChartId,
    pub contravariant: usize,
    pub covariant: usize,
}

impl TensorField for ZeroTensor {
    fn chart(&self) -> &ChartId {
        &self.chart
    }

    fn valence(&self) -> (usize, usize) {
        (self.contravariant, self.covariant)
    }

    fn eval(&self, p: &ChartPoint) -> Result<Tensor> {
        p.expect_chart(&self.chart)?;
        Ok(Tensor::zeros(self.contravariant, self.covariant))
    }
}

/// `new[.., i, ..] = Σ_m mat[i][m] old[.., m, ..]` on slot `axis`.
fn transform_slot(data: &[f64], rank: usize, axis: usize, mat: &Mat4) -> Vec<f64> {
    let stride = 4usize.pow((rank - 1 - axis) as u32);
    let mut out = vec![0.0; data.len()];
    for (idx, slot) in out.iter_mut().enumerate() {
        let i = (idx / stride) % 4;
        let base = idx - i * stride;
        *slot = (0..4).map(|m| mat[i][m] * data[base + m * stride]).sum();
    }
    out
}

/// Components of `h∗T` at `h(p)`: each contravariant slot is contracted with
/// `Λ = ∂x′/∂x`, each covariant slot with `Λ⁻¹`.
pub fn pushforward_tensor(map: &dyn ChartMap, tensor: &Tensor, p: &ChartPoint) -> Result<(ChartPoint, Tensor)> {
    let checked = Tensor::new(tensor.contravariant, tensor.covariant, tensor.data.clone())?;
    let q = map.forward(p)?;
    let lambda = map.jacobian(p)?;
    let k = invert(&lambda).ok_or_else(|| Error::Domain(format!("map is singular at {:?}", p.coords)))?;
    let kt: Mat4 = std::array::from_fn(|i| std::array::from_fn(|j| k[j][i]));
    let rank = checked.rank();
    let mut data = checked.data;
    for axis in 0..rank {
        let mat = if axis < checked.contravariant { &lambda } else { &kt };
        data = transform_slot(&data, rank, axis, mat);
    }
    Ok((q, Tensor { contravariant: checked.contravariant, covariant: checked.covariant, data }))
}

/// `max |(h∗T)(h(p)) - T(h(p))|` over the samples.
pub fn symmetry_defect(map: &dyn ChartMap, field: &dyn TensorField, samples: &[ChartPoint]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    if map.source() != field.chart() || map.target() != field.chart() {
        return Err(Error::ChartMismatch { expected: field.chart().clone(), found: map.target().clone() });
    }
    let mut worst = 0.0_f64;
    for p in samples {
        let (q, pushed) = pushforward_tensor(map, &field.eval(p)?, p)?;
        worst = worst.max(pushed.max_abs_diff(&field.eval(&q)?)?);
    }
    Ok(worst)
}

/// Whether `map` preserves `field` at every sample, to [`SYMMETRY_TOLERANCE`].
pub fn is_symmetry(map: &dyn ChartMap, field: &dyn TensorField, samples: &[ChartPoint]) -> Result<bool> {
    Ok(symmetry_defect(map, field, samples)? <= SYMMETRY_TOLERANCE)
}

#[derive(Debug, Clone, Serialize)]
pub struct DiffeoCheck {
    /// `max |Λ Λ⁻¹ - 1|`
    pub jacobian_defect: f64,
    /// `max |h⁻¹(h(p)) - p|`
    pub roundtrip_defect: f64,
}

/// Consistency of a map's Jacobians and inverse at `p`.
pub fn check_diffeo(map: &dyn ChartMap, p: &ChartPoint) -> Result<DiffeoCheck> {
    let lambda = map.jacobian(p)?;
    let q = map.forward(p)?;
    let x = map.inverse_jet(&HyperDual::seed(q.coords))?;
    let inv: Mat4 = std::array::from_fn(|m| x[m].grad);
    let prod = mat_mul(&lambda, &inv);
    let jacobian_defect = crate::tensor::max_abs_diff_mat(&prod, &crate::tensor::identity());
    let back = map.inverse(&q)?;
    let roundtrip_defect = (0..4).map(|i| (back.coords[i] - p.coords[i]).abs()).fold(0.0, f64::max);
    Ok(DiffeoCheck { jacobian_defect, roundtrip_defect })
}

/// `Q′(y) = Λ(x(y)) Q(x(y))`, components of a frame in the target chart.
#[derive(Debug)]
pub struct PushedFrame {
    frame: FrameField,
    map: Arc<dyn ChartMap>,
}

impl VectorComponents for PushedFrame {
    fn components(&self, y: &[HyperDual; 4]) -> Result<[HyperDual; 4]> {
        let y0 = HyperDual::values(y);
        let (x, k) = inverse_jacobian_jets(self.map.as_ref(), &y0)?;
        let q = self.frame.components_jet(&x)?;
        // Solve K Q′ = Q to first order.
        let k0: Mat4 = std::array::from_fn(|m| std::array::from_fn(|a| k[m][a].re));
        let ki = invert(&k0).ok_or_else(|| Error::Domain(format!("map is singular at {y0:?}")))?;
        let q0: Vec4 = std::array::from_fn(|m| q[m].re);
        let out0: Vec4 = std::array::from_fn(|a| (0..4).map(|m| ki[a][m] * q0[m]).sum());
        let mut out = out0.map(HyperDual::constant);
        for d in 0..4 {
            let rhs: Vec4 =
                std::array::from_fn(|m| q[m].grad[d] - (0..4).map(|b| k[m][b].grad[d] * out0[b]).sum::<f64>());
            for a in 0..4 {
                out[a].grad[d] = (0..4).map(|m| ki[a][m] * rhs[m]).sum();
            }
        }
        Ok(out.map(|c| compose_taylor(&c, &y0, y)))
    }
}

/// `frame` carried to `map.target()`, paired with `pushed_metric`, the base
/// metric in that chart.
pub fn push_frame(frame: &FrameField, pushed_metric: &MetricField, map: Arc<dyn ChartMap>) -> Result<FrameField> {
    if frame.chart() != map.source() {
        return Err(Error::ChartMismatch { expected: map.source().clone(), found: frame.chart().clone() });
    }
    if pushed_metric.chart() != map.target() {
        return Err(Error::ChartMismatch { expected: map.target().clone(), found: pushed_metric.chart().clone() });
    }
    let label = frame.label().to_string();
    Ok(FrameField::unit(label, Arc::new(PushedFrame { frame: frame.clone(), map }), pushed_metric))
}
