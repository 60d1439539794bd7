use std::fmt;
use std::sync::Arc;

use nalgebra::{Matrix3, Matrix4, SymmetricEigen};

use crate::error::{Error, Result};
use crate::geometry::{ChartId, ChartPoint};
use crate::hyperdual::HyperDual;
use crate::tensor::{invert, Mat4, Tensor3, Tensor4};

/// Metric components `g_{μν}` as functions of the chart coordinates.
///
/// Implementations are written against [`HyperDual`] arithmetic so that the
/// same code yields values, first and second derivatives.
pub trait MetricComponents: Send + Sync + fmt::Debug {
    fn components(&self, x: &[HyperDual; 4]) -> Result<[[HyperDual; 4]; 4]>;
}

/// A chart-expressed Lorentzian metric of signature (+,-,-,-).
#[derive(Clone)]
pub struct MetricField {
    name: String,
    chart: ChartId,
    derivative_order: u8,
    components: Arc<dyn MetricComponents>,
}

impl fmt::Debug for MetricField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricField")
            .field("name", &self.name)
            .field("chart", &self.chart)
            .field("derivative_order", &self.derivative_order)
            .finish()
    }
}

/// Metric value, inverse and exact derivatives at one point.
#[derive(Debug, Clone)]
pub struct MetricJet {
    pub point: ChartPoint,
    pub g: Mat4,
    pub ginv: Mat4,
    /// `dg[σ][μ][ν] = ∂_σ g_{μν}`
    pub dg: Tensor3,
    /// `ddg[σ][τ][μ][ν] = ∂_σ ∂_τ g_{μν}`; present when the metric supports order 2.
    pub ddg: Option<Tensor4>,
}

impl MetricField {
    pub fn new(
        name: impl Into<String>,
        chart: ChartId,
        derivative_order: u8,
        components: Arc<dyn MetricComponents>,
    ) -> Self {
        MetricField { name: name.into(), chart, derivative_order, components }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn chart(&self) -> &ChartId {
        &self.chart
    }

    pub fn derivative_order(&self) -> u8 {
        self.derivative_order
    }

    pub fn point(&self, coords: [f64; 4]) -> Result<ChartPoint> {
        ChartPoint::new(coords, self.chart.clone())
    }

    pub fn require_order(&self, required: u8) -> Result<()> {
        if self.derivative_order < required {
            return Err(Error::DerivativeOrder {
                metric: self.name.clone(),
                available: self.derivative_order,
                required,
            });
        }
        Ok(())
    }

    /// Components on arbitrary jets. No signature check; callers composing
    /// maps use this and check the values they need.
    pub fn components_jet(&self, x: &[HyperDual; 4]) -> Result<[[HyperDual; 4]; 4]> {
        let g = self.components.components(x)?;
        if g.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite(format!("metric `{}` at {:?}", self.name, HyperDual::values(x))));
        }
        Ok(g)
    }

    /// `g_{μν}(p)`, checked for symmetry and Lorentzian signature.
    pub fn eval(&self, p: &ChartPoint) -> Result<Mat4> {
        p.expect_chart(&self.chart)?;
        let g = self.components_jet(&HyperDual::constants(p.coords))?;
        let g = g.map(|row| row.map(|c| c.re));
        check_lorentzian(&g, p.coords)?;
        Ok(g)
    }

    pub fn inverse(&self, p: &ChartPoint) -> Result<Mat4> {
        let g = self.eval(p)?;
        invert(&g).ok_or(Error::SingularMetric(p.coords))
    }

    /// Value, inverse and derivatives at `p`.
    pub fn jet(&self, p: &ChartPoint) -> Result<MetricJet> {
        p.expect_chart(&self.chart)?;
        let gj = self.components_jet(&HyperDual::seed(p.coords))?;
        let g: Mat4 = std::array::from_fn(|i| std::array::from_fn(|j| gj[i][j].re));
        check_lorentzian(&g, p.coords)?;
        let ginv = invert(&g).ok_or(Error::SingularMetric(p.coords))?;
        let dg: Tensor3 = std::array::from_fn(|s| std::array::from_fn(|i| std::array::from_fn(|j| gj[i][j].grad[s])));
        let ddg = (self.derivative_order >= 2).then(|| {
            std::array::from_fn(|s| {
                std::array::from_fn(|t| std::array::from_fn(|i| std::array::from_fn(|j| gj[i][j].hess[s][t])))
            })
        });
        Ok(MetricJet { point: p.clone(), g, ginv, dg, ddg })
    }
}

/// Symmetry and (+,-,-,-) signature check.
pub fn check_lorentzian(g: &Mat4, point: [f64; 4]) -> Result<()> {
    let scale = g.iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs())).max(1.0);
    for i in 0..4 {
        for j in (i + 1)..4 {
            if (g[i][j] - g[j][i]).abs() > 1e-12 * scale {
                return Err(Error::Signature {
                    point,
                    detail: format!("g[{i}][{j}] = {} but g[{j}][{i}] = {}", g[i][j], g[j][i]),
                });
            }
        }
    }
    let m = Matrix4::from_fn(|i, j| g[i][j]);
    let det = m.determinant();
    if det.abs() <= f64::EPSILON * scale.powi(4) {
        return Err(Error::SingularMetric(point));
    }
    // Fast path: det < 0 with a negative-definite spatial block forces
    // exactly three negative eigenvalues by interlacing.
    let spatial = -Matrix3::from_fn(|i, j| g[i + 1][j + 1]);
    if det < 0.0 && spatial.cholesky().is_some() {
        return Ok(());
    }
    let eig = SymmetricEigen::new(m).eigenvalues;
    let positive = eig.iter().filter(|&&e| e > 0.0).count();
    let negative = eig.iter().filter(|&&e| e < 0.0).count();
    if positive == 1 && negative == 3 {
        Ok(())
    } else {
        Err(Error::Signature { point, detail: format!("{positive} positive and {negative} negative eigenvalues") })
    }
}

pub fn eval_metric(metric: &MetricField, p: &ChartPoint) -> Result<Mat4> {
    metric.eval(p)
}

pub fn inverse_metric(metric: &MetricField, p: &ChartPoint) -> Result<Mat4> {
    metric.inverse(p)
}

/// Constant-component metric, e.g. Minkowski `η` in an inertial chart.
#[derive(Debug, Clone)]
pub struct ConstantMetric(pub Mat4);

impl MetricComponents for ConstantMetric {
    fn components(&self, _x: &[HyperDual; 4]) -> Result<[[HyperDual; 4]; 4]> {
        Ok(self.0.map(|row| row.map(HyperDual::constant)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::ETA;

    #[test]
    fn signature_rejects_riemannian_and_singular() {
        let p = [0.0; 4];
        assert!(check_lorentzian(&ETA, p).is_ok());
        let euclid = crate::tensor::identity();
        assert!(matches!(check_lorentzian(&euclid, p), Err(Error::Signature { .. })));
        let mut singular = ETA;
        singular[3][3] = 0.0;
        assert!(matches!(check_lorentzian(&singular, p), Err(Error::SingularMetric(_))));
        let mut asym = ETA;
        asym[0][1] = 0.1;
        assert!(check_lorentzian(&asym, p).is_err());
    }

    #[test]
    fn signature_slow_path_accepts_tilted_lorentzian() {
        // dt dx cross term large enough that the spatial block is indefinite
        let g = [[0.5, 1.0, 0.0, 0.0], [1.0, 0.5, 0.0, 0.0], [0.0, 0.0, -1.0, 0.0], [0.0, 0.0, 0.0, -1.0]];
        assert!(check_lorentzian(&g, [0.0; 4]).is_ok());
    }

    #[test]
    fn chart_mismatch_is_reported() {
        let m = MetricField::new("eta", ChartId::new("inertial"), 2, Arc::new(ConstantMetric(ETA)));
        let p = ChartPoint::new([0.0; 4], ChartId::new("other")).unwrap();
        assert!(matches!(m.eval(&p), Err(Error::ChartMismatch { .. })));
    }
}
