//! Chart adapted to the frame `Z`, in which `Z = ∂/∂t′`:
//!
//! ```text
//! x¹′ = x¹ - u ∫₀ᵗ dr / (R S),    t′ = ∫₀ᵗ dr S / R - u x¹,    S = (R² + u²)^{1/2}
//! ```
//!
//! Eliminating `x¹` gives `t′ + u x¹′ = H(t)` with `H′ = R/S > 0`, which is
//! how the inverse is computed.

use std::sync::Arc;

use crate::catalog::{FriedmannModel, ScaleFactor};
use crate::error::Result;
use crate::geometry::{ChartId, ChartMap, MetricComponents, MetricField};
use crate::hyperdual::HyperDual;
use crate::numerics::{adaptive_simpson, monotone_root};
use crate::tensor::Vec4;

pub const Z_CHART: &str = "z-adapted";

/// Absolute tolerance of the time integrals and of the inverse.
pub const Z_CHART_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct ZChart {
    scale: Arc<dyn ScaleFactor>,
    u: f64,
    source: ChartId,
    target: ChartId,
}

struct Local {
    r: f64,
    rdot: f64,
    s: f64,
}

impl ZChart {
    pub fn new(model: &FriedmannModel) -> Self {
        ZChart { scale: model.scale.clone(), u: model.u, source: model.chart().clone(), target: ChartId::new(Z_CHART) }
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    fn local(&self, t: f64) -> Result<Local> {
        let (r, rdot, _) = self.scale.derivatives(t)?;
        Ok(Local { r, rdot, s: (r * r + self.u * self.u).sqrt() })
    }

    fn integral(&self, t: f64, f: impl Fn(&Local) -> f64) -> Result<f64> {
        adaptive_simpson(|r| Ok(f(&self.local(r)?)), 0.0, t, Z_CHART_TOLERANCE)
    }

    /// `F(t) = ∫₀ᵗ S/R`
    pub fn time_integral(&self, t: f64) -> Result<f64> {
        self.integral(t, |l| l.s / l.r)
    }

    /// `G(t) = ∫₀ᵗ 1/(R S)`
    pub fn shift_integral(&self, t: f64) -> Result<f64> {
        self.integral(t, |l| 1.0 / (l.r * l.s))
    }

    /// `H(t) = ∫₀ᵗ R/S`
    fn clock_integral(&self, t: f64) -> Result<f64> {
        self.integral(t, |l| l.r / l.s)
    }

    /// Comoving time of the point with adapted coordinates `(t′, x¹′)`.
    pub fn comoving_time(&self, t_prime: f64, x1_prime: f64) -> Result<f64> {
        let w = t_prime + self.u * x1_prime;
        if self.u == 0.0 {
            return Ok(w);
        }
        monotone_root(
            |t| {
                let l = self.local(t)?;
                Ok((self.clock_integral(t)? - w, l.r / l.s))
            },
            w,
            self.scale.domain_start(),
            Z_CHART_TOLERANCE,
        )
    }

    /// `t` as a jet of `(t′, x¹′)`, exact to second order.
    fn comoving_time_jet(&self, y: &[HyperDual; 4]) -> Result<HyperDual> {
        let w = y[0] + y[1] * self.u;
        let t0 = self.comoving_time(y[0].re, y[1].re)?;
        let l = self.local(t0)?;
        let h1 = l.r / l.s;
        let h2 = l.rdot * self.u * self.u / l.s.powi(3);
        Ok(w.chain(t0, 1.0 / h1, -h2 / h1.powi(3)))
    }
}

impl ChartMap for ZChart {
    fn source(&self) -> &ChartId {
        &self.source
    }

    fn target(&self) -> &ChartId {
        &self.target
    }

    fn forward_jet(&self, x: &[HyperDual; 4]) -> Result<[HyperDual; 4]> {
        let t = x[0].re;
        let l = self.local(t)?;
        let u2 = self.u * self.u;
        let f = x[0].chain(self.time_integral(t)?, l.s / l.r, -l.rdot * u2 / (l.s * l.r * l.r));
        let g = x[0].chain(
            self.shift_integral(t)?,
            1.0 / (l.r * l.s),
            -l.rdot * (l.s * l.s + l.r * l.r) / (l.r * l.r * l.s.powi(3)),
        );
        Ok([f - x[1] * self.u, x[1] - g * self.u, x[2], x[3]])
    }

    fn inverse_point(&self, y: &Vec4) -> Result<Vec4> {
        let t = self.comoving_time(y[0], y[1])?;
        Ok([t, y[1] + self.u * self.shift_integral(t)?, y[2], y[3]])
    }

    fn inverse_jet(&self, y: &[HyperDual; 4]) -> Result<[HyperDual; 4]> {
        let t = self.comoving_time_jet(y)?;
        let l = self.local(t.re)?;
        let g = t.chain(
            self.shift_integral(t.re)?,
            1.0 / (l.r * l.s),
            -l.rdot * (l.s * l.s + l.r * l.r) / (l.r * l.r * l.s.powi(3)),
        );
        Ok([t, y[1] + g * self.u, y[2], y[3]])
    }
}

pub fn z_chart(model: &FriedmannModel) -> ZChart {
    ZChart::new(model)
}

/// The Friedmann metric written directly in the adapted chart:
/// `dt′² - (R² + u²) dx¹′² - R² (dx²′² + dx³′²)` with `R` taken at the
/// comoving time of the point.
#[derive(Debug, Clone)]
pub struct ZChartMetric {
    chart: ZChart,
}

impl MetricComponents for ZChartMetric {
    fn components(&self, y: &[HyperDual; 4]) -> Result<[[HyperDual; 4]; 4]> {
        let t = self.chart.comoving_time_jet(y)?;
        let r = self.chart.scale.eval(t)?;
        let r2 = r * r;
        let mut g = [[HyperDual::ZERO; 4]; 4];
        g[0][0] = HyperDual::ONE;
        g[1][1] = -(r2 + self.chart.u * self.chart.u);
        g[2][2] = -r2;
        g[3][3] = -r2;
        Ok(g)
    }
}

/// Closed-form metric in the adapted chart, with exact second derivatives.
pub fn z_chart_metric(model: &FriedmannModel) -> MetricField {
    let chart = ZChart::new(model);
    MetricField::new("friedmann (z-adapted)", ChartId::new(Z_CHART), 2, Arc::new(ZChartMetric { chart }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::make_friedmann;
    use crate::geometry::ChartPoint;

    /// Antiderivatives for `R = 1 + a t`.
    fn closed_f(a: f64, u: f64, t: f64) -> f64 {
        let prim = |t: f64| {
            let r = 1.0 + a * t;
            let s = (r * r + u * u).sqrt();
            (s - u * ((u + s) / r).ln()) / a
        };
        prim(t) - prim(0.0)
    }

    fn closed_g(a: f64, u: f64, t: f64) -> f64 {
        let r = 1.0 + a * t;
        let s = (r * r + u * u).sqrt();
        let s0 = (1.0 + u * u).sqrt();
        ((u + s0).ln() - ((u + s) / r).ln()) / (a * u)
    }

    #[test]
    fn integrals_match_antiderivatives() {
        for (a, u) in [(1e-3, 0.1005), (0.3, 1.0), (0.05, 2.5)] {
            let z = z_chart(&make_friedmann(a, u).unwrap());
            for t in [0.5, 3.0, 10.0] {
                assert!((z.time_integral(t).unwrap() - closed_f(a, u, t)).abs() < 1e-11, "F a={a} t={t}");
                assert!((z.shift_integral(t).unwrap() - closed_g(a, u, t)).abs() < 1e-11, "G a={a} t={t}");
            }
        }
    }

    #[test]
    fn static_time_integral_is_linear() {
        let u = 0.75;
        let z = z_chart(&make_friedmann(0.0, u).unwrap());
        for t in [0.1, 1.0, 7.5] {
            assert!((z.time_integral(t).unwrap() - t * (1.0 + u * u).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_u_is_identity_and_origin_is_fixed() {
        let m = make_friedmann(0.01, 0.0).unwrap();
        let z = z_chart(&m);
        let p = ChartPoint::new([2.0, 1.0, -3.0, 0.5], m.chart().clone()).unwrap();
        let q = z.forward(&p).unwrap();
        for i in 0..4 {
            assert!((q.coords[i] - p.coords[i]).abs() < 1e-12);
        }
        let m = make_friedmann(0.01, 0.4).unwrap();
        let q = z_chart(&m).forward(&ChartPoint::new([0.0; 4], m.chart().clone()).unwrap()).unwrap();
        assert_eq!(q.coords, [0.0; 4]);
    }

    #[test]
    fn roundtrip_and_inverse_jet() {
        let m = make_friedmann(0.02, 0.3).unwrap();
        let z = z_chart(&m);
        let p = ChartPoint::new([4.0, -2.0, 1.0, 3.0], m.chart().clone()).unwrap();
        let q = z.forward(&p).unwrap();
        let back = z.inverse(&q).unwrap();
        for i in 0..4 {
            assert!((back.coords[i] - p.coords[i]).abs() < 1e-10);
        }
        let exact = z.inverse_jet(&HyperDual::seed(q.coords)).unwrap();
        let generic = crate::geometry::invert_two_jet(
            &back.coords,
            &q.coords,
            &z.forward_jet(&HyperDual::seed(back.coords)).unwrap(),
            &HyperDual::seed(q.coords),
        )
        .unwrap();
        for i in 0..4 {
            for a in 0..4 {
                assert!((exact[i].grad[a] - generic[i].grad[a]).abs() < 1e-10);
                for b in 0..4 {
                    assert!((exact[i].hess[a][b] - generic[i].hess[a][b]).abs() < 1e-9);
                }
            }
        }
    }
}
