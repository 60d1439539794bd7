use serde::Serialize;

use crate::error::Result;
use crate::geometry::{ChartPoint, MetricField, MetricJet};
use crate::tensor::{Tensor3, Tensor4};

/// Levi-Civita coefficients `gamma[μ][ν][ρ] = Γ^μ_{νρ}` at a point.
#[derive(Debug, Clone, Serialize)]
pub struct ConnectionCoefficients {
    pub gamma: Tensor3,
    pub point: ChartPoint,
}

impl ConnectionCoefficients {
    pub fn get(&self, mu: usize, nu: usize, rho: usize) -> f64 {
        self.gamma[mu][nu][rho]
    }

    /// `Γ^μ_{αβ} u^α v^β`
    pub fn contract(&self, u: &[f64; 4], v: &[f64; 4]) -> [f64; 4] {
        contract_gamma(&self.gamma, u, v)
    }
}

pub(crate) fn contract_gamma(gamma: &Tensor3, u: &[f64; 4], v: &[f64; 4]) -> [f64; 4] {
    std::array::from_fn(|m| {
        let mut s = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                s += gamma[m][a][b] * u[a] * v[b];
            }
        }
        s
    })
}

pub(crate) fn gamma_from_jet(jet: &MetricJet) -> Tensor3 {
    let mut gamma = [[[0.0; 4]; 4]; 4];
    // lowered[α][ν][ρ] = ½(∂_ν g_{αρ} + ∂_ρ g_{αν} - ∂_α g_{νρ})
    let mut lowered = [[[0.0; 4]; 4]; 4];
    for a in 0..4 {
        for n in 0..4 {
            for r in n..4 {
                let v = 0.5 * (jet.dg[n][a][r] + jet.dg[r][a][n] - jet.dg[a][n][r]);
                lowered[a][n][r] = v;
                lowered[a][r][n] = v;
            }
        }
    }
    for m in 0..4 {
        for n in 0..4 {
            for r in n..4 {
                let v: f64 = (0..4).map(|a| jet.ginv[m][a] * lowered[a][n][r]).sum();
                gamma[m][n][r] = v;
                gamma[m][r][n] = v;
            }
        }
    }
    gamma
}

/// `dgamma[σ][μ][ν][ρ] = ∂_σ Γ^μ_{νρ}`; needs second metric derivatives.
pub(crate) fn gamma_derivative_from_jet(jet: &MetricJet, ddg: &Tensor4) -> Tensor4 {
    let gi = &jet.ginv;
    // ∂_σ g^{μα} = -g^{μβ} ∂_σ g_{βγ} g^{γα}
    let mut dginv = [[[0.0; 4]; 4]; 4];
    for s in 0..4 {
        for m in 0..4 {
            for a in 0..4 {
                let mut v = 0.0;
                for b in 0..4 {
                    for c in 0..4 {
                        v -= gi[m][b] * jet.dg[s][b][c] * gi[c][a];
                    }
                }
                dginv[s][m][a] = v;
            }
        }
    }
    let mut out = [[[[0.0; 4]; 4]; 4]; 4];
    for s in 0..4 {
        for m in 0..4 {
            for n in 0..4 {
                for r in n..4 {
                    let mut v = 0.0;
                    for a in 0..4 {
                        let low = 0.5 * (jet.dg[n][a][r] + jet.dg[r][a][n] - jet.dg[a][n][r]);
                        let dlow = 0.5 * (ddg[s][n][a][r] + ddg[s][r][a][n] - ddg[s][a][n][r]);
                        v += dginv[s][m][a] * low + gi[m][a] * dlow;
                    }
                    out[s][m][n][r] = v;
                    out[s][m][r][n] = v;
                }
            }
        }
    }
    out
}

/// Christoffel symbols of the second kind at `p`.
pub fn christoffel(metric: &MetricField, p: &ChartPoint) -> Result<ConnectionCoefficients> {
    metric.require_order(1)?;
    let jet = metric.jet(p)?;
    Ok(ConnectionCoefficients { gamma: gamma_from_jet(&jet), point: p.clone() })
}

/// Γ and its first derivatives at `p`.
pub fn christoffel_with_derivative(metric: &MetricField, p: &ChartPoint) -> Result<(Tensor3, Tensor4)> {
    metric.require_order(2)?;
    let jet = metric.jet(p)?;
    let ddg = jet.ddg.expect("order checked");
    Ok((gamma_from_jet(&jet), gamma_derivative_from_jet(&jet, &ddg)))
}
