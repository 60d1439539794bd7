use crate::error::Result;
use crate::frames::FrameField;
use crate::geometry::{christoffel, ChartPoint, MetricField};
use crate::tensor::Mat4;

/// `Q^μ_{;ν} = ∂_ν Q^μ + Γ^μ_{νρ} Q^ρ`, indexed `[μ][ν]`.
pub fn covariant_derivative_field(metric: &MetricField, field: &FrameField, p: &ChartPoint) -> Result<Mat4> {
    let gamma = christoffel(metric, p)?;
    let (q, dq) = field.derivative(p)?;
    Ok(std::array::from_fn(|m| {
        std::array::from_fn(|n| dq[m][n] + (0..4).map(|r| gamma.gamma[m][n][r] * q[r]).sum::<f64>())
    }))
}

/// `(D_Q Q)^μ = Q^ν Q^μ_{;ν}`
pub fn self_acceleration(metric: &MetricField, field: &FrameField, p: &ChartPoint) -> Result<[f64; 4]> {
    let dq = covariant_derivative_field(metric, field, p)?;
    let q = field.eval(p)?;
    Ok(std::array::from_fn(|m| (0..4).map(|n| q[n] * dq[m][n]).sum()))
}
