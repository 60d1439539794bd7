use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frames::{kinematic_decompose, FrameField, KinematicDecomposition};
use crate::geodesic::{parallel_transport_tetrad, GeodesicPath, TransportedTetrad};
use crate::geometry::{
    christoffel_with_derivative, contract_gamma, covariant_derivative_field, invert_two_jet, ChartId, ChartMap,
    ChartPoint, MetricField,
};
use crate::hyperdual::HyperDual;
use crate::normal::point::check_tetrad;
use crate::normal::{CoordinateTimeField, TimeTangent, DEFAULT_VALIDITY_RADIUS};
use crate::tensor::{invert, Mat4, Vec4};

/// Geodesic data at one sample.
#[derive(Debug, Clone)]
struct Knot {
    s: f64,
    p: Vec4,
    /// `Ṗ`, `P̈`
    pd: Vec4,
    pdd: Vec4,
    /// Spatial legs `e₁..e₃` and their derivatives.
    e: [Vec4; 3],
    ed: [Vec4; 3],
    /// `q[i][j] = Γ(e_i, e_j)` and its derivative.
    q: [[Vec4; 3]; 3],
    qd: [[Vec4; 3]; 3],
}

/// Coordinates `(τ, ξ¹, ξ², ξ³)` around a geodesic `P(τ)` with transported
/// legs `e_i(τ)`:
///
/// ```text
/// x(τ, ξ) = P(τ) + ξⁱ e_i(τ) - ½ ξⁱ ξʲ Γ(e_i, e_j)|_{P(τ)}
/// ```
///
/// Between samples `P` is a quintic Hermite interpolant and the legs and
/// `Γ(e_i,e_j)` are cubic Hermite interpolants. On the geodesic the metric is
/// `η` and every `Γ` vanishes.
#[derive(Debug, Clone)]
pub struct FermiChart {
    source: ChartId,
    target: ChartId,
    knots: Vec<Knot>,
    validity_radius: f64,
}

fn cubic_coeffs(p0: f64, v0: f64, p1: f64, v1: f64, h: f64) -> [f64; 6] {
    [p0, h * v0, -3.0 * p0 - 2.0 * h * v0 + 3.0 * p1 - h * v1, 2.0 * p0 + h * v0 - 2.0 * p1 + h * v1, 0.0, 0.0]
}

fn quintic_coeffs(p0: f64, v0: f64, a0: f64, p1: f64, v1: f64, a1: f64, h: f64) -> [f64; 6] {
    let (hv0, hv1, ha0, ha1) = (h * v0, h * v1, h * h * a0, h * h * a1);
    [
        p0,
        hv0,
        0.5 * ha0,
        -10.0 * p0 - 6.0 * hv0 - 1.5 * ha0 + 0.5 * ha1 - 4.0 * hv1 + 10.0 * p1,
        15.0 * p0 + 8.0 * hv0 + 1.5 * ha0 - ha1 + 7.0 * hv1 - 15.0 * p1,
        -6.0 * p0 - 3.0 * hv0 - 0.5 * ha0 + 0.5 * ha1 - 3.0 * hv1 + 6.0 * p1,
    ]
}

/// `Σ c_k t^k` or its first derivative in `t`, on a jet.
fn horner(c: &[f64; 6], t: HyperDual, derivative: bool) -> HyperDual {
    let mut acc = HyperDual::ZERO;
    if derivative {
        for k in (1..6).rev() {
            acc = acc * t + c[k] * k as f64;
        }
    } else {
        for k in (0..6).rev() {
            acc = acc * t + c[k];
        }
    }
    acc
}

impl FermiChart {
    fn build(metric: &MetricField, transported: &TransportedTetrad, validity_radius: f64) -> Result<Self> {
        let path = &transported.path;
        if path.samples.len() < 2 {
            return Err(Error::EmptySamples);
        }
        let mut knots = Vec::with_capacity(path.samples.len());
        for (smp, tet) in path.samples.iter().zip(&transported.tetrads) {
            let (gamma, dgamma) = christoffel_with_derivative(metric, &smp.point)?;
            let u = smp.velocity;
            let pdd = contract_gamma(&gamma, &u, &u).map(|c| -c);
            let e = [tet[1], tet[2], tet[3]];
            let ed = e.map(|ei| contract_gamma(&gamma, &u, &ei).map(|c| -c));
            let q = std::array::from_fn(|i| std::array::from_fn(|j| contract_gamma(&gamma, &e[i], &e[j])));
            let qd = std::array::from_fn(|i| {
                std::array::from_fn(|j| {
                    let a = contract_gamma(&gamma, &ed[i], &e[j]);
                    let b = contract_gamma(&gamma, &e[i], &ed[j]);
                    std::array::from_fn(|m| {
                        let mut d = 0.0;
                        for s in 0..4 {
                            for al in 0..4 {
                                for be in 0..4 {
                                    d += dgamma[s][m][al][be] * u[s] * e[i][al] * e[j][be];
                                }
                            }
                        }
                        d + a[m] + b[m]
                    })
                })
            });
            knots.push(Knot { s: smp.s, p: smp.point.coords, pd: u, pdd, e, ed, q, qd });
        }
        Ok(FermiChart {
            source: metric.chart().clone(),
            target: ChartId::new(format!("fermi@{:?}", path.samples[0].point.coords)),
            knots,
            validity_radius,
        })
    }

    pub fn validity_radius(&self) -> f64 {
        self.validity_radius
    }

    /// Proper-time range covered.
    pub fn span(&self) -> (f64, f64) {
        (self.knots[0].s, self.knots[self.knots.len() - 1].s)
    }

    fn segment(&self, tau: f64) -> Result<usize> {
        let (lo, hi) = self.span();
        if !(tau >= lo && tau <= hi) {
            return Err(Error::OutsideTube {
                point: [tau, f64::NAN, f64::NAN, f64::NAN],
                radius: self.validity_radius,
            });
        }
        let k = self.knots.partition_point(|k| k.s <= tau);
        Ok(k.clamp(1, self.knots.len() - 1) - 1)
    }

    /// `x(τ, ξ)` (or `∂x/∂τ` when `tangent`) on jets.
    fn embed(&self, y: &[HyperDual; 4], tangent: bool) -> Result<[HyperDual; 4]> {
        let k = self.segment(y[0].re)?;
        let (a, b) = (&self.knots[k], &self.knots[k + 1]);
        let h = b.s - a.s;
        let t = (y[0] - a.s) * (1.0 / h);
        let scale = if tangent { 1.0 / h } else { 1.0 };
        let xi = [y[1], y[2], y[3]];
        Ok(std::array::from_fn(|m| {
            let mut x = horner(&quintic_coeffs(a.p[m], a.pd[m], a.pdd[m], b.p[m], b.pd[m], b.pdd[m], h), t, tangent);
            for i in 0..3 {
                let c = cubic_coeffs(a.e[i][m], a.ed[i][m], b.e[i][m], b.ed[i][m], h);
                x += horner(&c, t, tangent) * xi[i];
            }
            for i in 0..3 {
                for j in 0..3 {
                    let c = cubic_coeffs(a.q[i][j][m], a.qd[i][j][m], b.q[i][j][m], b.qd[i][j][m], h);
                    x -= horner(&c, t, tangent) * xi[i] * xi[j] * 0.5;
                }
            }
            x * scale
        }))
    }

    fn check_radius(&self, y: &Vec4) -> Result<()> {
        let r = (y[1] * y[1] + y[2] * y[2] + y[3] * y[3]).sqrt();
        if r > self.validity_radius {
            return Err(Error::OutsideTube { point: *y, radius: self.validity_radius });
        }
        Ok(())
    }

    fn solve(&self, x: &Vec4) -> Result<Vec4> {
        // Start from the sample nearest in t.
        let n = self.knots.partition_point(|k| k.p[0] < x[0]).min(self.knots.len() - 1);
        let k =
            if n > 0 && (self.knots[n - 1].p[0] - x[0]).abs() < (self.knots[n].p[0] - x[0]).abs() { n - 1 } else { n };
        let kn = &self.knots[k];
        let basis: Mat4 = std::array::from_fn(|m| [kn.pd[m], kn.e[0][m], kn.e[1][m], kn.e[2][m]]);
        let binv = invert(&basis).ok_or_else(|| Error::Domain("degenerate tetrad".into()))?;
        let d: Vec4 = std::array::from_fn(|m| x[m] - kn.p[m]);
        let mut y: Vec4 = std::array::from_fn(|a| (0..4).map(|m| binv[a][m] * d[m]).sum());
        y[0] += kn.s;
        let (lo, hi) = self.span();
        for _ in 0..50 {
            y[0] = y[0].clamp(lo, hi);
            let f = self.embed(&HyperDual::seed(y), false)?;
            let j: Mat4 = std::array::from_fn(|m| f[m].grad);
            let ji = invert(&j).ok_or_else(|| Error::Domain(format!("tube chart degenerate near {x:?}")))?;
            let r: Vec4 = std::array::from_fn(|m| f[m].re - x[m]);
            let mut size = 0.0_f64;
            for a in 0..4 {
                let da: f64 = (0..4).map(|m| ji[a][m] * r[m]).sum();
                y[a] -= da;
                size = size.max(da.abs());
            }
            if size <= 1e-15 * (1.0 + y.iter().fold(0.0_f64, |m, v| m.max(v.abs()))) {
                self.check_radius(&y)?;
                self.segment(y[0])?;
                return Ok(y);
            }
        }
        Err(Error::NoConvergence { what: "tube chart inverse", iterations: 50 })
    }
}

impl ChartMap for FermiChart {
    fn source(&self) -> &ChartId {
        &self.source
    }

    fn target(&self) -> &ChartId {
        &self.target
    }

    fn forward_jet(&self, x: &[HyperDual; 4]) -> Result<[HyperDual; 4]> {
        let x0 = HyperDual::values(x);
        let y0 = self.solve(&x0)?;
        let fwd = self.embed(&HyperDual::seed(y0), false)?;
        invert_two_jet(&y0, &x0, &fwd, x)
    }

    fn inverse_point(&self, y: &Vec4) -> Result<Vec4> {
        self.check_radius(y)?;
        Ok(HyperDual::values(&self.embed(&HyperDual::constants(*y), false)?))
    }

    fn inverse_jet(&self, y: &[HyperDual; 4]) -> Result<[HyperDual; 4]> {
        self.check_radius(&HyperDual::values(y))?;
        self.embed(y, false)
    }
}

impl TimeTangent for FermiChart {
    fn time_tangent_jet(&self, y: &[HyperDual; 4]) -> Result<[HyperDual; 4]> {
        self.embed(y, true)
    }
}

/// The frame `L = ∂/∂τ` of a tube chart around a geodesic.
#[derive(Debug, Clone)]
pub struct LLRFFrame {
    pub chart: Arc<FermiChart>,
    /// `L` normalized pointwise.
    pub frame: FrameField,
    /// `∂/∂τ` as is; unit only on the geodesic.
    pub raw: FrameField,
    pub geodesic_id: String,
    pub transported: TransportedTetrad,
}

impl LLRFFrame {
    pub fn geodesic(&self) -> &GeodesicPath {
        &self.transported.path
    }
}

/// Build the tube chart and `L` along `geodesic` from an orthonormal tetrad
/// with `e₀` equal to the initial velocity.
pub fn llrf_along_geodesic(metric: &MetricField, geodesic: &GeodesicPath, tetrad0: [Vec4; 4]) -> Result<LLRFFrame> {
    llrf_along_geodesic_with_radius(metric, geodesic, tetrad0, DEFAULT_VALIDITY_RADIUS)
}

pub fn llrf_along_geodesic_with_radius(
    metric: &MetricField,
    geodesic: &GeodesicPath,
    tetrad0: [Vec4; 4],
    validity_radius: f64,
) -> Result<LLRFFrame> {
    if !(validity_radius > 0.0) {
        return Err(Error::InvalidParameter(format!("tube radius {validity_radius} must be positive")));
    }
    let start = geodesic.samples.first().ok_or(Error::EmptySamples)?;
    check_tetrad(metric, &start.point, &tetrad0)?;
    let transported = parallel_transport_tetrad(metric, geodesic, tetrad0)?;
    let chart = Arc::new(FermiChart::build(metric, &transported, validity_radius)?);
    let field = Arc::new(CoordinateTimeField { chart: chart.clone() });
    let frame = FrameField::normalized("L", field.clone(), metric);
    let raw = FrameField::unit("L (raw)", field, metric);
    let geodesic_id = format!("{} geodesic from {:?}", geodesic.metric_id, start.point.coords);
    Ok(LLRFFrame { chart, frame, raw, geodesic_id, transported })
}

#[derive(Debug, Clone, Serialize)]
pub struct LlrfExpansion {
    pub point: ChartPoint,
    /// Tube coordinates `(τ, ξ)` of the point.
    pub tube_coords: Vec4,
    /// `Θ` of the normalized field.
    pub normalized: f64,
    /// Divergence of `∂/∂τ` itself.
    pub raw: f64,
}

/// `Θ_L` at `p`, normalized and raw.
pub fn llrf_expansion(metric: &MetricField, llrf: &LLRFFrame, p: &ChartPoint) -> Result<LlrfExpansion> {
    let tube = llrf.chart.forward(p)?;
    let normalized = kinematic_decompose(metric, &llrf.frame, p)?.expansion;
    let d = covariant_derivative_field(metric, &llrf.raw, p)?;
    let raw = (0..4).map(|m| d[m][m]).sum();
    Ok(LlrfExpansion { point: p.clone(), tube_coords: tube.coords, normalized, raw })
}

/// Full decomposition of the normalized `L` at `p`.
pub fn llrf_decomposition(metric: &MetricField, llrf: &LLRFFrame, p: &ChartPoint) -> Result<KinematicDecomposition> {
    llrf.chart.forward(p)?;
    kinematic_decompose(metric, &llrf.frame, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{make_friedmann, minkowski};
    use crate::geodesic::{diagonal_tetrad, integrate_geodesic, tetrad_from_velocity, StepControl};
    use crate::geometry::{christoffel, push_metric};
    use crate::tensor::{max_abs_diff_mat, ETA};

    fn comoving(a: f64) -> (crate::catalog::FriedmannModel, LLRFFrame) {
        let f = make_friedmann(a, 0.0).unwrap();
        let p0 = f.metric.point([0.0; 4]).unwrap();
        let path = integrate_geodesic(&f.metric, &p0, [1.0, 0.0, 0.0, 0.0], 2.0, StepControl::fixed(0.01)).unwrap();
        let tet = diagonal_tetrad(&f.metric.eval(&p0).unwrap()).unwrap();
        let l = llrf_along_geodesic(&f.metric, &path, tet).unwrap();
        (f, l)
    }

    #[test]
    fn flat_tube_chart_is_a_boost() {
        let m = minkowski();
        let g = 1.0 / (1.0f64 - 0.09).sqrt();
        let u = [g, 0.3 * g, 0.0, 0.0];
        let path = integrate_geodesic(&m, &m.point([0.0; 4]).unwrap(), u, 1.0, StepControl::fixed(0.1)).unwrap();
        let l = llrf_along_geodesic(&m, &path, tetrad_from_velocity(&ETA, &u).unwrap()).unwrap();
        let p = m.point([0.5, 0.17, 0.01, -0.02]).unwrap();
        let y = l.chart.forward(&p).unwrap();
        let back = l.chart.inverse(&y).unwrap();
        for i in 0..4 {
            assert!((back.coords[i] - p.coords[i]).abs() < 1e-13);
        }
        let e = llrf_expansion(&m, &l, &p).unwrap();
        assert!(e.normalized.abs() < 1e-12 && e.raw.abs() < 1e-12);
        assert!((l.frame.eval(&p).unwrap()[1] - u[1]).abs() < 1e-12);
    }

    #[test]
    fn inertial_along_the_geodesic() {
        let (f, l) = comoving(0.1);
        let pushed = push_metric(&f.metric, l.chart.clone()).unwrap();
        for tau in [0.05, 0.5, 1.234, 1.9] {
            let q = pushed.point([tau, 0.0, 0.0, 0.0]).unwrap();
            assert!(max_abs_diff_mat(&pushed.eval(&q).unwrap(), &ETA) < 1e-9, "{tau}");
            let gamma = christoffel(&pushed, &q).unwrap().gamma;
            assert!(crate::tensor::max_abs(gamma.iter().flatten().flatten()) < 1e-7, "{tau}");
            let p = f.metric.point([tau, 0.0, 0.0, 0.0]).unwrap();
            let e = llrf_expansion(&f.metric, &l, &p).unwrap();
            assert!(e.normalized.abs() < 1e-7 && e.raw.abs() < 1e-7, "{e:?}");
        }
    }

    #[test]
    fn not_geodesic_off_the_axis() {
        let (f, l) = comoving(0.1);
        let p = f.metric.point([1.0, 0.03, 0.0, 0.0]).unwrap();
        let d = llrf_decomposition(&f.metric, &l, &p).unwrap();
        assert!(d.acceleration_magnitude() > 1e-9, "{d:?}");
    }

    #[test]
    fn tube_limits() {
        let (f, l) = comoving(0.1);
        assert!(matches!(
            l.chart.forward(&f.metric.point([1.0, 0.2, 0.0, 0.0]).unwrap()),
            Err(Error::OutsideTube { .. })
        ));
        assert!(matches!(l.chart.inverse_point(&[3.0, 0.0, 0.0, 0.0]), Err(Error::OutsideTube { .. })));
        let path = l.geodesic().clone();
        let tet = diagonal_tetrad(&f.metric.eval(&path.samples[0].point).unwrap()).unwrap();
        assert!(llrf_along_geodesic_with_radius(&f.metric, &path, tet, 0.0).is_err());
        let mut bad = tet;
        bad[1][1] = 2.0;
        assert!(matches!(llrf_along_geodesic(&f.metric, &path, bad), Err(Error::NotOrthonormal(_))));
    }
}
