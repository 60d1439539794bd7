use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::frames::{FrameField, UNIT_TOLERANCE};
use crate::geometry::{covariant_derivative_field, ChartPoint, MetricField};
use crate::tensor::{flatten_mat, inner, lower, Mat4, Vec4};

/// Split of `Dα_Q` into acceleration, vorticity, shear and expansion:
///
/// ```text
/// Q_{μ;ν} = a_μ α_ν + ω_{μν} + σ_{μν} + ⅓ Θ h_{μν},    h = g - α ⊗ α
/// ```
#[derive(Debug, Clone)]
pub struct KinematicDecomposition {
    /// Covector `a_μ = Q_{μ;ν} Q^ν`.
    pub acceleration: Vec4,
    pub vorticity: Mat4,
    pub shear: Mat4,
    pub expansion: f64,
    pub projection: Mat4,
    pub point: ChartPoint,
    pub frame_label: String,
    pub velocity: Vec4,
    pub coframe: Vec4,
    /// `Q_{μ;ν}` as computed directly.
    pub covariant_derivative: Mat4,
    pub inverse_metric: Mat4,
}

impl KinematicDecomposition {
    /// `a ⊗ α + ω + σ + ⅓Θh`
    pub fn reassemble(&self) -> Mat4 {
        std::array::from_fn(|m| {
            std::array::from_fn(|n| {
                self.acceleration[m] * self.coframe[n]
                    + self.vorticity[m][n]
                    + self.shear[m][n]
                    + self.expansion / 3.0 * self.projection[m][n]
            })
        })
    }

    fn full_contraction(&self, t: &Mat4) -> f64 {
        let gi = &self.inverse_metric;
        let mut s = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        s += gi[a][c] * gi[b][d] * t[a][b] * t[c][d];
                    }
                }
            }
        }
        s
    }

    /// `√(½ σ_{μν} σ^{μν})`
    pub fn shear_scalar(&self) -> f64 {
        (0.5 * self.full_contraction(&self.shear)).max(0.0).sqrt()
    }

    /// `√(½ ω_{μν} ω^{μν})`
    pub fn vorticity_scalar(&self) -> f64 {
        (0.5 * self.full_contraction(&self.vorticity)).max(0.0).sqrt()
    }

    /// `√(-a_μ a^μ)`; the acceleration is spacelike.
    pub fn acceleration_magnitude(&self) -> f64 {
        (-inner(&self.inverse_metric, &self.acceleration, &self.acceleration)).max(0.0).sqrt()
    }
}

impl Serialize for KinematicDecomposition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("KinematicDecomposition", 6)?;
        st.serialize_field("theta", &self.expansion)?;
        st.serialize_field("accel", &self.acceleration)?;
        st.serialize_field("vorticity", &flatten_mat(&self.vorticity))?;
        st.serialize_field("shear", &flatten_mat(&self.shear))?;
        st.serialize_field("point", &self.point.coords)?;
        st.serialize_field("frame_label", &self.frame_label)?;
        st.end()
    }
}

pub fn kinematic_decompose(metric: &MetricField, frame: &FrameField, p: &ChartPoint) -> Result<KinematicDecomposition> {
    let g = metric.eval(p)?;
    let ginv = metric.inverse(p)?;
    let q = frame.eval(p)?;
    let defect = inner(&g, &q, &q) - 1.0;
    if defect.abs() > UNIT_TOLERANCE {
        return Err(Error::NotUnit { point: p.coords, defect });
    }
    let d = covariant_derivative_field(metric, frame, p)?;
    let alpha = lower(&g, &q);
    let expansion: f64 = (0..4).map(|m| d[m][m]).sum();
    // Q_{μ;ν}
    let k: Mat4 = std::array::from_fn(|m| std::array::from_fn(|n| (0..4).map(|a| g[m][a] * d[a][n]).sum()));
    let acceleration: Vec4 = std::array::from_fn(|m| (0..4).map(|n| k[m][n] * q[n]).sum());
    let projection: Mat4 = std::array::from_fn(|m| std::array::from_fn(|n| g[m][n] - alpha[m] * alpha[n]));
    // h^α_μ = δ^α_μ - Q^α α_μ
    let mixed: Mat4 =
        std::array::from_fn(|a| std::array::from_fn(|m| if a == m { 1.0 } else { 0.0 } - q[a] * alpha[m]));
    let mut perp = [[0.0; 4]; 4];
    for m in 0..4 {
        for n in 0..4 {
            let mut v = 0.0;
            for a in 0..4 {
                for b in 0..4 {
                    v += mixed[a][m] * mixed[b][n] * k[a][b];
                }
            }
            perp[m][n] = v;
        }
    }
    let vorticity = std::array::from_fn(|m| std::array::from_fn(|n| 0.5 * (perp[m][n] - perp[n][m])));
    let shear = std::array::from_fn(|m| {
        std::array::from_fn(|n| 0.5 * (perp[m][n] + perp[n][m]) - expansion / 3.0 * projection[m][n])
    });
    Ok(KinematicDecomposition {
        acceleration,
        vorticity,
        shear,
        expansion,
        projection,
        point: p.clone(),
        frame_label: frame.label().to_string(),
        velocity: q,
        coframe: alpha,
        covariant_derivative: k,
        inverse_metric: ginv,
    })
}
