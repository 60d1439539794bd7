use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{ChartId, ChartPoint, MetricComponents, MetricField};
use crate::hyperdual::HyperDual;
use crate::tensor::{invert, Mat4, Tensor3, Vec4};

/// A diffeomorphism between two charts, `x ↦ x′`.
///
/// Implementors provide the forward map on jets and a pointwise inverse. The
/// inverse on jets is derived from the forward 2-jet unless overridden.
pub trait ChartMap: Send + Sync + fmt::Debug {
    fn source(&self) -> &ChartId;
    fn target(&self) -> &ChartId;
    fn forward_jet(&self, x: &[HyperDual; 4]) -> Result<[HyperDual; 4]>;
    fn inverse_point(&self, y: &Vec4) -> Result<Vec4>;

    fn inverse_jet(&self, y: &[HyperDual; 4]) -> Result<[HyperDual; 4]> {
        let y0 = HyperDual::values(y);
        let x0 = self.inverse_point(&y0)?;
        let fwd = self.forward_jet(&HyperDual::seed(x0))?;
        invert_two_jet(&x0, &y0, &fwd, y)
    }

    fn forward(&self, p: &ChartPoint) -> Result<ChartPoint> {
        p.expect_chart(self.source())?;
        let y = self.forward_jet(&HyperDual::constants(p.coords))?;
        ChartPoint::new(HyperDual::values(&y), self.target().clone())
    }

    fn inverse(&self, q: &ChartPoint) -> Result<ChartPoint> {
        q.expect_chart(self.target())?;
        ChartPoint::new(self.inverse_point(&q.coords)?, self.source().clone())
    }

    /// `Λ^μ_α = ∂x′^μ/∂x^α` at `p`.
    fn jacobian(&self, p: &ChartPoint) -> Result<Mat4> {
        p.expect_chart(self.source())?;
        let y = self.forward_jet(&HyperDual::seed(p.coords))?;
        Ok(std::array::from_fn(|m| y[m].grad))
    }

    /// `(Λ⁻¹)^α_μ = ∂x^α/∂x′^μ` at `forward(p)`.
    fn inverse_jacobian(&self, p: &ChartPoint) -> Result<Mat4> {
        invert(&self.jacobian(p)?).ok_or_else(|| Error::Domain(format!("singular Jacobian at {:?}", p.coords)))
    }
}

/// Evaluate the quadratic Taylor polynomial carried by `f` (taken about `y0`
/// in seed variables) on the jet `y`.
pub fn compose_taylor(f: &HyperDual, y0: &Vec4, y: &[HyperDual; 4]) -> HyperDual {
    let d: [HyperDual; 4] = std::array::from_fn(|a| y[a] - y0[a]);
    let mut out = HyperDual::constant(f.re);
    for a in 0..4 {
        if f.grad[a] != 0.0 {
            out += d[a] * f.grad[a];
        }
    }
    for a in 0..4 {
        for b in 0..4 {
            if f.hess[a][b] != 0.0 {
                out += d[a] * d[b] * (0.5 * f.hess[a][b]);
            }
        }
    }
    out
}

/// Inverse 2-jet from a forward 2-jet at `x0 ↦ y0`, composed onto `y`.
///
/// With `K = J⁻¹`, the inverse has second derivatives
/// `M^μ_{ab} = -K^μ_ν H^ν_{αβ} K^α_a K^β_b`.
pub fn invert_two_jet(x0: &Vec4, y0: &Vec4, fwd: &[HyperDual; 4], y: &[HyperDual; 4]) -> Result<[HyperDual; 4]> {
    let j: Mat4 = std::array::from_fn(|m| fwd[m].grad);
    let k = invert(&j).ok_or_else(|| Error::Domain(format!("singular Jacobian at {x0:?}")))?;
    let mut kh = [[[0.0; 4]; 4]; 4];
    for mu in 0..4 {
        for al in 0..4 {
            for be in 0..4 {
                kh[mu][al][be] = (0..4).map(|nu| k[mu][nu] * fwd[nu].hess[al][be]).sum();
            }
        }
    }
    let mut out = [HyperDual::ZERO; 4];
    for mu in 0..4 {
        let mut f = HyperDual::constant(x0[mu]);
        f.grad = k[mu];
        for a in 0..4 {
            for b in 0..4 {
                let mut s = 0.0;
                for al in 0..4 {
                    for be in 0..4 {
                        s += kh[mu][al][be] * k[al][a] * k[be][b];
                    }
                }
                f.hess[a][b] = -s;
            }
        }
        out[mu] = compose_taylor(&f, y0, y);
    }
    Ok(out)
}

/// The inverse of a map as a map.
#[derive(Debug, Clone)]
pub struct InverseMap(pub Arc<dyn ChartMap>);

impl ChartMap for InverseMap {
    fn source(&self) -> &ChartId {
        self.0.target()
    }
    fn target(&self) -> &ChartId {
        self.0.source()
    }
    fn forward_jet(&self, x: &[HyperDual; 4]) -> Result<[HyperDual; 4]> {
        self.0.inverse_jet(x)
    }
    fn inverse_point(&self, y: &Vec4) -> Result<Vec4> {
        Ok(HyperDual::values(&self.0.forward_jet(&HyperDual::constants(*y))?))
    }
    fn inverse_jet(&self, y: &[HyperDual; 4]) -> Result<[HyperDual; 4]> {
        self.0.forward_jet(y)
    }
}

/// `second ∘ first`.
#[derive(Debug, Clone)]
pub struct ComposedMap {
    first: Arc<dyn ChartMap>,
    second: Arc<dyn ChartMap>,
}

impl ComposedMap {
    pub fn new(first: Arc<dyn ChartMap>, second: Arc<dyn ChartMap>) -> Result<Self> {
        if first.target() != second.source() {
            return Err(Error::ChartMismatch { expected: first.target().clone(), found: second.source().clone() });
        }
        Ok(ComposedMap { first, second })
    }
}

impl ChartMap for ComposedMap {
    fn source(&self) -> &ChartId {
        self.first.source()
    }
    fn target(&self) -> &ChartId {
        self.second.target()
    }
    fn forward_jet(&self, x: &[HyperDual; 4]) -> Result<[HyperDual; 4]> {
        self.second.forward_jet(&self.first.forward_jet(x)?)
    }
    fn inverse_point(&self, y: &Vec4) -> Result<Vec4> {
        self.first.inverse_point(&self.second.inverse_point(y)?)
    }
    fn inverse_jet(&self, y: &[HyperDual; 4]) -> Result<[HyperDual; 4]> {
        self.first.inverse_jet(&self.second.inverse_jet(y)?)
    }
}

/// `x′ = Λx + b`.
#[derive(Debug, Clone)]
pub struct AffineMap {
    source: ChartId,
    target: ChartId,
    linear: Mat4,
    inverse: Mat4,
    shift: Vec4,
}

impl AffineMap {
    pub fn new(source: ChartId, target: ChartId, linear: Mat4, shift: Vec4) -> Result<Self> {
        let inverse =
            invert(&linear).ok_or_else(|| Error::InvalidParameter("affine map with singular linear part".into()))?;
        Ok(AffineMap { source, target, linear, inverse, shift })
    }

    pub fn identity(chart: ChartId) -> Self {
        let id = crate::tensor::identity();
        AffineMap { source: chart.clone(), target: chart, linear: id, inverse: id, shift: [0.0; 4] }
    }

    pub fn translation(chart: ChartId, shift: Vec4) -> Self {
        AffineMap { shift, ..Self::identity(chart) }
    }

    pub fn dilation(chart: ChartId, factor: f64) -> Result<Self> {
        let m = std::array::from_fn(|i| std::array::from_fn(|j| if i == j { factor } else { 0.0 }));
        Self::new(chart.clone(), chart, m, [0.0; 4])
    }

    /// Lorentz boost with velocity `v` along `x¹`.
    pub fn boost_x(chart: ChartId, v: f64) -> Result<Self> {
        if !(v.abs() < 1.0) {
            return Err(Error::InvalidParameter(format!("boost velocity {v} must satisfy |v| < 1")));
        }
        let g = 1.0 / (1.0 - v * v).sqrt();
        let mut m = crate::tensor::identity();
        m[0][0] = g;
        m[0][1] = -g * v;
        m[1][0] = -g * v;
        m[1][1] = g;
        Self::new(chart.clone(), chart, m, [0.0; 4])
    }

    pub fn linear(&self) -> &Mat4 {
        &self.linear
    }

    pub fn with_charts(mut self, source: ChartId, target: ChartId) -> Self {
        self.source = source;
        self.target = target;
        self
    }
}

impl ChartMap for AffineMap {
    fn source(&self) -> &ChartId {
        &self.source
    }
    fn target(&self) -> &ChartId {
        &self.target
    }
    fn forward_jet(&self, x: &[HyperDual; 4]) -> Result<[HyperDual; 4]> {
        Ok(std::array::from_fn(|m| {
            let mut s = HyperDual::constant(self.shift[m]);
            for a in 0..4 {
                if self.linear[m][a] != 0.0 {
                    s += x[a] * self.linear[m][a];
                }
            }
            s
        }))
    }
    fn inverse_point(&self, y: &Vec4) -> Result<Vec4> {
        Ok(std::array::from_fn(|m| (0..4).map(|a| self.inverse[m][a] * (y[a] - self.shift[a])).sum()))
    }
    fn inverse_jet(&self, y: &[HyperDual; 4]) -> Result<[HyperDual; 4]> {
        Ok(std::array::from_fn(|m| {
            let mut s = HyperDual::ZERO;
            for a in 0..4 {
                if self.inverse[m][a] != 0.0 {
                    s += (y[a] - self.shift[a]) * self.inverse[m][a];
                }
            }
            s
        }))
    }
}

/// `∂x^μ/∂x′^a` as first-order jets in the target-chart seed variables,
/// together with the source point as a second-order jet.
pub(crate) fn inverse_jacobian_jets(map: &dyn ChartMap, y0: &Vec4) -> Result<([HyperDual; 4], [[HyperDual; 4]; 4])> {
    let x = map.inverse_jet(&HyperDual::seed(*y0))?;
    let k = std::array::from_fn(|m| {
        std::array::from_fn(|a| {
            let mut h = HyperDual::constant(x[m].grad[a]);
            h.grad = x[m].hess[a];
            h
        })
    });
    Ok((x, k))
}

/// A metric expressed in the target chart of a map:
/// `g′_{ab}(x′) = ∂_a x^μ ∂_b x^ν g_{μν}(x(x′))`.
///
/// First derivatives are exact; second derivatives would need the third jet
/// of the map, so the result has derivative order at most 1.
#[derive(Debug, Clone)]
pub struct PushedMetric {
    metric: MetricField,
    map: Arc<dyn ChartMap>,
}

impl MetricComponents for PushedMetric {
    fn components(&self, y: &[HyperDual; 4]) -> Result<[[HyperDual; 4]; 4]> {
        let y0 = HyperDual::values(y);
        let (x, k) = inverse_jacobian_jets(self.map.as_ref(), &y0)?;
        let g = self.metric.components_jet(&x)?;
        let mut out = [[HyperDual::ZERO; 4]; 4];
        for a in 0..4 {
            for b in a..4 {
                let mut s = HyperDual::ZERO;
                for m in 0..4 {
                    for n in 0..4 {
                        if g[m][n].re != 0.0 || g[m][n].grad.iter().any(|&v| v != 0.0) {
                            s += k[m][a] * k[n][b] * g[m][n];
                        }
                    }
                }
                let s = compose_taylor(&s.first_order(), &y0, y);
                out[a][b] = s;
                out[b][a] = s;
            }
        }
        Ok(out)
    }
}

/// `metric` expressed in `map.target()`.
pub fn push_metric(metric: &MetricField, map: Arc<dyn ChartMap>) -> Result<MetricField> {
    if metric.chart() != map.source() {
        return Err(Error::ChartMismatch { expected: map.source().clone(), found: metric.chart().clone() });
    }
    let name = format!("{} in {}", metric.name(), map.target());
    let order = metric.derivative_order().min(1);
    let target = map.target().clone();
    Ok(MetricField::new(name, target, order, Arc::new(PushedMetric { metric: metric.clone(), map })))
}

/// Second derivatives `∂²x′^μ/∂x^α∂x^β` at `p`.
pub fn forward_hessian(map: &dyn ChartMap, p: &ChartPoint) -> Result<Tensor3> {
    p.expect_chart(map.source())?;
    let y = map.forward_jet(&HyperDual::seed(p.coords))?;
    Ok(std::array::from_fn(|m| y[m].hess))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{identity, mat_mul, max_abs_diff_mat};

    /// `x′ = (t + x², x + t³, y, z + t y)`
    #[derive(Debug)]
    struct Bent(ChartId, ChartId);

    impl ChartMap for Bent {
        fn source(&self) -> &ChartId {
            &self.0
        }
        fn target(&self) -> &ChartId {
            &self.1
        }
        fn forward_jet(&self, x: &[HyperDual; 4]) -> Result<[HyperDual; 4]> {
            Ok([x[0] + x[1] * x[1], x[1] + x[0] * x[0] * x[0], x[2], x[3] + x[0] * x[2]])
        }
        fn inverse_point(&self, y: &Vec4) -> Result<Vec4> {
            let mut x = *y;
            for _ in 0..100 {
                let f = self.forward_jet(&HyperDual::seed(x))?;
                let j: Mat4 = std::array::from_fn(|m| f[m].grad);
                let k = invert(&j).unwrap();
                let r: Vec4 = std::array::from_fn(|m| f[m].re - y[m]);
                for m in 0..4 {
                    x[m] -= (0..4).map(|a| k[m][a] * r[a]).sum::<f64>();
                }
            }
            Ok(x)
        }
    }

    fn bent() -> Bent {
        Bent(ChartId::new("x"), ChartId::new("y"))
    }

    #[test]
    fn inverse_jet_matches_finite_differences() {
        let m = bent();
        let y0 = [0.3, -0.2, 0.5, 0.1];
        let x = m.inverse_jet(&HyperDual::seed(y0)).unwrap();
        let h = 1e-4;
        for mu in 0..4 {
            for a in 0..4 {
                for b in 0..4 {
                    let f = |da: f64, db: f64| {
                        let mut y = y0;
                        y[a] += da;
                        y[b] += db;
                        m.inverse_point(&y).unwrap()[mu]
                    };
                    let fd = (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4.0 * h * h);
                    assert!((x[mu].hess[a][b] - fd).abs() < 1e-6, "{mu}{a}{b}: {} vs {fd}", x[mu].hess[a][b]);
                }
            }
        }
    }

    #[test]
    fn jacobians_are_mutually_inverse() {
        let m = bent();
        let p = ChartPoint::new([0.1, 0.2, -0.3, 0.2], ChartId::new("x")).unwrap();
        let j = m.jacobian(&p).unwrap();
        let inv = InverseMap(Arc::new(bent()));
        let q = m.forward(&p).unwrap();
        let k = inv.jacobian(&q).unwrap();
        assert!(max_abs_diff_mat(&mat_mul(&j, &k), &identity()) < 1e-12);
        let back = inv.forward(&q).unwrap();
        for i in 0..4 {
            assert!((back.coords[i] - p.coords[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn composition_requires_matching_charts() {
        let a: Arc<dyn ChartMap> = Arc::new(bent());
        assert!(ComposedMap::new(a.clone(), a.clone()).is_err());
        let c = ComposedMap::new(a.clone(), Arc::new(InverseMap(a))).unwrap();
        let p = ChartPoint::new([0.1, 0.2, 0.3, 0.4], ChartId::new("x")).unwrap();
        let j = c.jacobian(&p).unwrap();
        assert!(max_abs_diff_mat(&j, &identity()) < 1e-12);
    }

    #[test]
    fn boost_preserves_minkowski() {
        let c = ChartId::new("inertial");
        let eta = MetricField::new("eta", c.clone(), 2, Arc::new(crate::geometry::ConstantMetric(crate::tensor::ETA)));
        let b = AffineMap::boost_x(c.clone(), 0.6).unwrap().with_charts(c, ChartId::new("boosted"));
        let pushed = push_metric(&eta, Arc::new(b)).unwrap();
        let g = pushed.eval(&pushed.point([0.3, 1.0, 2.0, 3.0]).unwrap()).unwrap();
        assert!(max_abs_diff_mat(&g, &crate::tensor::ETA) < 1e-14);
        assert!(AffineMap::boost_x(ChartId::new("c"), 1.0).is_err());
    }
}
