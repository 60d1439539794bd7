use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geodesic::{orthonormality_defect, ORTHONORMAL_TOLERANCE};
use crate::geometry::{
    christoffel, christoffel_with_derivative, invert_two_jet, push_metric, riemann, ChartId, ChartMap, ChartPoint,
    MetricField,
};
use crate::hyperdual::HyperDual;
use crate::normal::TimeTangent;
use crate::tensor::{invert, max_abs_diff_mat, Mat4, Tensor3, Tensor4, Vec4, ETA};

/// Chart radius (Euclidean norm of `ξ`) used when none is given.
pub const DEFAULT_VALIDITY_RADIUS: f64 = 0.05;

/// Riemann normal coordinates `ξ` at a point `p₀`, with axes along a given
/// orthonormal tetrad `E`:
///
/// ```text
/// x = p₀ + y - ½ Γ(y,y) - ⅙ C(y,y,y),   y = E ξ,
/// C^μ_{αβγ} = ∂_γ Γ^μ_{αβ} - 2 Γ^μ_{σα} Γ^σ_{βγ}
/// ```
///
/// The cubic term makes `∂Γ(ξ)` at the origin the symmetrized curvature, not
/// just `Γ(ξ) = 0`. `x ↦ ξ` is solved by Newton iteration.
#[derive(Debug, Clone)]
pub struct NormalChart {
    base_point: ChartPoint,
    target: ChartId,
    /// `tetrad[a]` is `e_a` in base-chart components.
    tetrad: [Vec4; 4],
    /// `e[μ][a] = e_a^μ`
    e: Mat4,
    e_inv: Mat4,
    gamma: Tensor3,
    /// `cubic[μ][α][β][γ]`, symmetric in the last three slots.
    cubic: Tensor4,
    validity_radius: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct NormalChartRecord {
    pub base_point: ChartPoint,
    /// Row `a` is `e_a` in base-chart components.
    pub tetrad: [Vec4; 4],
    /// `gamma_at_p0[μ][ν][ρ] = Γ^μ_{νρ}(p₀)` in the base chart.
    pub gamma_at_p0: Tensor3,
    pub validity_radius: f64,
}

/// Figures of merit of a normal chart at its origin.
#[derive(Debug, Clone, Serialize)]
pub struct NormalChartCheck {
    /// `max |g_ξ(0) - η|`
    pub metric_defect: f64,
    /// `max |Γ_ξ(0)|`
    pub gamma_max: f64,
    /// `max |∂_μ Γ^α_{βγ} + ⅓(R^α_{βγμ} + R^α_{γβμ})|` at the origin, with
    /// `∂Γ` from central differences.
    pub curvature_relation_defect: f64,
    pub difference_step: f64,
}

fn eval_poly(p0: &Vec4, gamma: &Tensor3, cubic: Option<&Tensor4>, y: &[HyperDual; 4]) -> [HyperDual; 4] {
    std::array::from_fn(|m| {
        let mut s = y[m] + p0[m];
        for a in 0..4 {
            for b in 0..4 {
                if gamma[m][a][b] != 0.0 {
                    s -= y[a] * y[b] * (0.5 * gamma[m][a][b]);
                }
            }
        }
        if let Some(c) = cubic {
            for a in 0..4 {
                for b in 0..4 {
                    let yy = y[a] * y[b];
                    for g in 0..4 {
                        if c[m][a][b][g] != 0.0 {
                            s -= yy * y[g] * (c[m][a][b][g] / 6.0);
                        }
                    }
                }
            }
        }
        s
    })
}

pub(crate) fn check_tetrad(metric: &MetricField, p: &ChartPoint, tetrad: &[Vec4; 4]) -> Result<()> {
    let defect = orthonormality_defect(&metric.eval(p)?, tetrad);
    if defect > ORTHONORMAL_TOLERANCE {
        return Err(Error::NotOrthonormal(defect));
    }
    Ok(())
}

/// Normal chart at `p0` with the default validity radius.
pub fn build_normal_chart(metric: &MetricField, p0: &ChartPoint, tetrad: [Vec4; 4]) -> Result<NormalChart> {
    NormalChart::new(metric, p0, tetrad, DEFAULT_VALIDITY_RADIUS)
}

impl NormalChart {
    pub fn new(metric: &MetricField, p0: &ChartPoint, tetrad: [Vec4; 4], validity_radius: f64) -> Result<Self> {
        if !(validity_radius > 0.0) {
            return Err(Error::InvalidParameter(format!("validity radius {validity_radius} must be positive")));
        }
        p0.expect_chart(metric.chart())?;
        check_tetrad(metric, p0, &tetrad)?;
        let (gamma, dgamma) = christoffel_with_derivative(metric, p0)?;
        let e: Mat4 = std::array::from_fn(|m| std::array::from_fn(|a| tetrad[a][m]));
        let e_inv = invert(&e).ok_or(Error::NotOrthonormal(f64::INFINITY))?;
        let mut raw = [[[[0.0; 4]; 4]; 4]; 4];
        for m in 0..4 {
            for a in 0..4 {
                for b in 0..4 {
                    for g in 0..4 {
                        let gg: f64 = (0..4).map(|s| gamma[m][s][a] * gamma[s][b][g]).sum();
                        raw[m][a][b][g] = dgamma[g][m][a][b] - 2.0 * gg;
                    }
                }
            }
        }
        let mut cubic = [[[[0.0; 4]; 4]; 4]; 4];
        for m in 0..4 {
            for a in 0..4 {
                for b in 0..4 {
                    for g in 0..4 {
                        cubic[m][a][b][g] = (raw[m][a][b][g]
                            + raw[m][a][g][b]
                            + raw[m][b][a][g]
                            + raw[m][b][g][a]
                            + raw[m][g][a][b]
                            + raw[m][g][b][a])
                            / 6.0;
                    }
                }
            }
        }
        let target = ChartId::new(format!("normal@{:?}", p0.coords));
        Ok(NormalChart { base_point: p0.clone(), target, tetrad, e, e_inv, gamma, cubic, validity_radius })
    }

    pub fn base_point(&self) -> &ChartPoint {
        &self.base_point
    }

    pub fn tetrad(&self) -> &[Vec4; 4] {
        &self.tetrad
    }

    pub fn gamma_at_base(&self) -> &Tensor3 {
        &self.gamma
    }

    pub fn validity_radius(&self) -> f64 {
        self.validity_radius
    }

    pub fn record(&self) -> NormalChartRecord {
        NormalChartRecord {
            base_point: self.base_point.clone(),
            tetrad: self.tetrad,
            gamma_at_p0: self.gamma,
            validity_radius: self.validity_radius,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.record()).expect("record serializes")
    }

    fn rotate(&self, xi: &[HyperDual; 4]) -> [HyperDual; 4] {
        std::array::from_fn(|m| {
            let mut s = HyperDual::ZERO;
            for a in 0..4 {
                if self.e[m][a] != 0.0 {
                    s += xi[a] * self.e[m][a];
                }
            }
            s
        })
    }

    fn check_radius(&self, xi: &Vec4) -> Result<()> {
        let r = xi.iter().map(|c| c * c).sum::<f64>().sqrt();
        if r > self.validity_radius {
            let p = HyperDual::values(&eval_poly(
                &self.base_point.coords,
                &self.gamma,
                Some(&self.cubic),
                &self.rotate(&HyperDual::constants(*xi)),
            ));
            return Err(Error::OutsideTube { point: p, radius: self.validity_radius });
        }
        Ok(())
    }

    /// `x ↦ ξ` truncated at second order: `ξ = E⁻¹(Δx + ½Γ(Δx,Δx))`.
    pub fn second_order_forward(&self, x: &Vec4) -> Vec4 {
        let d: Vec4 = std::array::from_fn(|m| x[m] - self.base_point.coords[m]);
        let q = crate::geometry::contract_gamma(&self.gamma, &d, &d);
        let w: Vec4 = std::array::from_fn(|m| d[m] + 0.5 * q[m]);
        std::array::from_fn(|a| (0..4).map(|m| self.e_inv[a][m] * w[m]).sum())
    }

    /// `ξ ↦ x` truncated at second order: `x = p₀ + Eξ - ½Γ(Eξ,Eξ)`.
    pub fn second_order_inverse(&self, xi: &Vec4) -> Vec4 {
        let y = self.rotate(&HyperDual::constants(*xi));
        HyperDual::values(&eval_poly(&self.base_point.coords, &self.gamma, None, &y))
    }

    fn solve(&self, x: &Vec4) -> Result<Vec4> {
        let mut xi = self.second_order_forward(x);
        for _ in 0..50 {
            let f =
                eval_poly(&self.base_point.coords, &self.gamma, Some(&self.cubic), &self.rotate(&HyperDual::seed(xi)));
            let j: Mat4 = std::array::from_fn(|m| f[m].grad);
            let k = invert(&j).ok_or_else(|| Error::Domain(format!("normal chart degenerate at {x:?}")))?;
            let r: Vec4 = std::array::from_fn(|m| f[m].re - x[m]);
            let dxi: Vec4 = std::array::from_fn(|a| (0..4).map(|m| k[a][m] * r[m]).sum());
            let mut size = 0.0_f64;
            for a in 0..4 {
                xi[a] -= dxi[a];
                size = size.max(dxi[a].abs());
            }
            if size <= 1e-16 * (1.0 + xi.iter().fold(0.0_f64, |m, v| m.max(v.abs()))) {
                return Ok(xi);
            }
        }
        Err(Error::NoConvergence { what: "normal chart inverse", iterations: 50 })
    }

    /// The base metric written in these coordinates.
    pub fn metric_in_chart(self: &Arc<Self>, metric: &MetricField) -> Result<MetricField> {
        push_metric(metric, self.clone())
    }

    /// Metric, connection and curvature-relation defects at the origin.
    pub fn check(self: &Arc<Self>, metric: &MetricField) -> Result<NormalChartCheck> {
        let g_xi = self.metric_in_chart(metric)?;
        let origin = g_xi.point([0.0; 4])?;
        let metric_defect = max_abs_diff_mat(&g_xi.eval(&origin)?, &ETA);
        let gamma0 = christoffel(&g_xi, &origin)?;
        let gamma_max = crate::tensor::max_abs(gamma0.gamma.iter().flatten().flatten());
        let h = 1e-4;
        let mut dgamma = [[[[0.0; 4]; 4]; 4]; 4];
        for mu in 0..4 {
            let mut step = [0.0; 4];
            step[mu] = h;
            let plus = christoffel(&g_xi, &origin.offset(step))?.gamma;
            let minus = christoffel(&g_xi, &origin.offset(step.map(|c| -c)))?.gamma;
            for a in 0..4 {
                for b in 0..4 {
                    for c in 0..4 {
                        dgamma[mu][a][b][c] = (plus[a][b][c] - minus[a][b][c]) / (2.0 * h);
                    }
                }
            }
        }
        let riem = self.riemann_in_chart(metric)?;
        let mut worst = 0.0_f64;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for mu in 0..4 {
                        let target = -(riem[a][b][c][mu] + riem[a][c][b][mu]) / 3.0;
                        worst = worst.max((dgamma[mu][a][b][c] - target).abs());
                    }
                }
            }
        }
        Ok(NormalChartCheck { metric_defect, gamma_max, curvature_relation_defect: worst, difference_step: h })
    }

    /// Riemann tensor at `p₀` in normal-chart components (tensor transform).
    pub fn riemann_in_chart(&self, metric: &MetricField) -> Result<Tensor4> {
        let r = riemann(metric, &self.base_point)?.riemann;
        let mut out = [[[[0.0; 4]; 4]; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let mut s = 0.0;
                        for al in 0..4 {
                            if self.e_inv[a][al] == 0.0 {
                                continue;
                            }
                            for be in 0..4 {
                                for ga in 0..4 {
                                    for mu in 0..4 {
                                        s += self.e_inv[a][al]
                                            * r[al][be][ga][mu]
                                            * self.e[be][b]
                                            * self.e[ga][c]
                                            * self.e[mu][d];
                                    }
                                }
                            }
                        }
                        out[a][b][c][d] = s;
                    }
                }
            }
        }
        Ok(out)
    }
}

impl ChartMap for NormalChart {
    fn source(&self) -> &ChartId {
        &self.base_point.chart
    }

    fn target(&self) -> &ChartId {
        &self.target
    }

    fn forward_jet(&self, x: &[HyperDual; 4]) -> Result<[HyperDual; 4]> {
        let x0 = HyperDual::values(x);
        let xi0 = self.solve(&x0)?;
        self.check_radius(&xi0)?;
        let fwd =
            eval_poly(&self.base_point.coords, &self.gamma, Some(&self.cubic), &self.rotate(&HyperDual::seed(xi0)));
        invert_two_jet(&xi0, &x0, &fwd, x)
    }

    fn inverse_point(&self, xi: &Vec4) -> Result<Vec4> {
        Ok(HyperDual::values(&self.inverse_jet(&HyperDual::constants(*xi))?))
    }

    fn inverse_jet(&self, xi: &[HyperDual; 4]) -> Result<[HyperDual; 4]> {
        self.check_radius(&HyperDual::values(xi))?;
        Ok(eval_poly(&self.base_point.coords, &self.gamma, Some(&self.cubic), &self.rotate(xi)))
    }
}

impl TimeTangent for NormalChart {
    fn time_tangent_jet(&self, xi: &[HyperDual; 4]) -> Result<[HyperDual; 4]> {
        // ∂x/∂ξ⁰ = e₀ - Γ(y, e₀) - ½ C(e₀, y, y)
        let y = self.rotate(xi);
        let e0 = self.tetrad[0];
        Ok(std::array::from_fn(|m| {
            let mut s = HyperDual::constant(e0[m]);
            for a in 0..4 {
                let ga: f64 = (0..4).map(|b| self.gamma[m][a][b] * e0[b]).sum();
                if ga != 0.0 {
                    s -= y[a] * ga;
                }
            }
            for a in 0..4 {
                for b in 0..4 {
                    let cab: f64 = (0..4).map(|g| self.cubic[m][g][a][b] * e0[g]).sum();
                    if cab != 0.0 {
                        s -= y[a] * y[b] * (0.5 * cab);
                    }
                }
            }
            s
        }))
    }
}
