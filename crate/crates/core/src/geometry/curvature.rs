//! Curvature of the Levi-Civita connection.
//!
//! Sign convention, used everywhere in the crate:
//!
//! ```text
//! R^α_{βγμ} = ∂_γ Γ^α_{μβ} - ∂_μ Γ^α_{γβ} + Γ^α_{γλ} Γ^λ_{μβ} - Γ^α_{μλ} Γ^λ_{γβ}
//! Ric_{βμ}  = R^α_{βαμ}
//! S         = g^{βμ} Ric_{βμ}
//! G         = Ric - ½ S g
//! ```
//!
//! With this choice Riemann normal coordinates satisfy
//! `∂_μ Γ^α_{βγ} = -⅓ (R^α_{βγμ} + R^α_{γβμ})` at their origin, which the
//! normal-chart tests assert.

use serde::Serialize;

use crate::error::Result;
use crate::geometry::connection::{gamma_derivative_from_jet, gamma_from_jet};
use crate::geometry::{ChartPoint, MetricField};
use crate::tensor::{Mat4, Tensor3, Tensor4};

#[derive(Debug, Clone, Serialize)]
pub struct CurvatureTensor {
    /// `riemann[α][β][γ][μ] = R^α_{βγμ}`
    pub riemann: Tensor4,
    pub ricci: Mat4,
    pub scalar: f64,
    pub einstein: Mat4,
    pub point: ChartPoint,
}

pub(crate) fn riemann_from(gamma: &Tensor3, dgamma: &Tensor4) -> Tensor4 {
    let mut r = [[[[0.0; 4]; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for m in (c + 1)..4 {
                    let mut v = dgamma[c][a][m][b] - dgamma[m][a][c][b];
                    for l in 0..4 {
                        v += gamma[a][c][l] * gamma[l][m][b] - gamma[a][m][l] * gamma[l][c][b];
                    }
                    r[a][b][c][m] = v;
                    r[a][b][m][c] = -v;
                }
            }
        }
    }
    r
}

pub(crate) fn contractions(riemann: &Tensor4, g: &Mat4, ginv: &Mat4) -> (Mat4, f64, Mat4) {
    let mut ricci = [[0.0; 4]; 4];
    for b in 0..4 {
        for m in 0..4 {
            ricci[b][m] = (0..4).map(|a| riemann[a][b][a][m]).sum();
        }
    }
    let mut scalar = 0.0;
    for b in 0..4 {
        for m in 0..4 {
            scalar += ginv[b][m] * ricci[b][m];
        }
    }
    let einstein = std::array::from_fn(|i| std::array::from_fn(|j| ricci[i][j] - 0.5 * scalar * g[i][j]));
    (ricci, scalar, einstein)
}

pub fn riemann(metric: &MetricField, p: &ChartPoint) -> Result<CurvatureTensor> {
    metric.require_order(2)?;
    let jet = metric.jet(p)?;
    let ddg = jet.ddg.expect("order checked");
    let gamma = gamma_from_jet(&jet);
    let dgamma = gamma_derivative_from_jet(&jet, &ddg);
    let riemann = riemann_from(&gamma, &dgamma);
    let (ricci, scalar, einstein) = contractions(&riemann, &jet.g, &jet.ginv);
    Ok(CurvatureTensor { riemann, ricci, scalar, einstein, point: p.clone() })
}

pub fn curvature_contractions(metric: &MetricField, p: &ChartPoint) -> Result<(Mat4, f64, Mat4)> {
    let c = riemann(metric, p)?;
    Ok((c.ricci, c.scalar, c.einstein))
}
