use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frames::UNIT_TOLERANCE;
use crate::geometry::{christoffel, ChartId, ChartPoint, MetricField};
use crate::tensor::{inner, Vec4};

/// Per-step tolerance of the adaptive integrator when none is given.
pub const DEFAULT_ADAPTIVE_TOLERANCE: f64 = 1e-10;

/// Largest number of steps attempted in one integration.
pub const MAX_STEPS: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StepControl {
    /// Classical fourth-order Runge–Kutta with a constant step.
    Fixed { step: f64 },
    /// Dormand–Prince 4(5) with per-step error control.
    Adaptive { tolerance: f64, initial_step: f64, min_step: f64 },
}

impl StepControl {
    pub fn fixed(step: f64) -> Self {
        StepControl::Fixed { step }
    }

    pub fn adaptive(tolerance: f64) -> Self {
        StepControl::Adaptive { tolerance, initial_step: 1e-2, min_step: 1e-12 }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            StepControl::Fixed { step } => step > 0.0 && step.is_finite(),
            StepControl::Adaptive { tolerance, initial_step, min_step } => {
                tolerance > 0.0 && initial_step > 0.0 && min_step > 0.0 && min_step <= initial_step
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("invalid step control {self:?}")))
        }
    }
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl::fixed(1e-3)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeodesicSample {
    /// Proper time.
    pub s: f64,
    pub point: ChartPoint,
    /// `dx^μ/ds`
    pub velocity: Vec4,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", content = "reason", rename_all = "kebab-case")]
pub enum Termination {
    Completed,
    /// Integration stopped because the next step left the chart domain.
    LeftDomain(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Default)]
pub struct IntegratorStats {
    pub steps: usize,
    pub rejected_steps: usize,
    /// Largest accepted local error estimate; absent for fixed steps.
    pub max_error_estimate: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GeodesicPath {
    pub samples: Vec<GeodesicSample>,
    pub metric_id: String,
    pub chart: ChartId,
    pub stats: IntegratorStats,
    pub termination: Termination,
}

impl GeodesicPath {
    pub fn first(&self) -> &GeodesicSample {
        &self.samples[0]
    }

    pub fn last(&self) -> &GeodesicSample {
        &self.samples[self.samples.len() - 1]
    }

    /// Largest `|g(σ̇,σ̇) - 1|` over the samples.
    pub fn max_norm_defect(&self, metric: &MetricField) -> Result<f64> {
        let mut worst = 0.0_f64;
        for smp in &self.samples {
            let g = metric.eval(&smp.point)?;
            worst = worst.max((inner(&g, &smp.velocity, &smp.velocity) - 1.0).abs());
        }
        Ok(worst)
    }

    /// Index of the sample with parameter `s`, if present.
    pub fn index_of(&self, s: f64) -> Option<usize> {
        self.samples.iter().position(|smp| smp.s == s)
    }

    /// CSV with header `s,t,x1,x2,x3,u0,u1,u2,u3,dx1_dt,dx2_dt,dx3_dt`, 17
    /// significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,t,x1,x2,x3,u0,u1,u2,u3,dx1_dt,dx2_dt,dx3_dt\n");
        for smp in &self.samples {
            let u = smp.velocity;
            let slopes = [u[1] / u[0], u[2] / u[0], u[3] / u[0]];
            let vals = std::iter::once(smp.s).chain(smp.point.coords).chain(u).chain(slopes);
            let row: Vec<String> = vals.map(format_sig17).collect();
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }
}

/// A float with 17 significant digits in scientific notation.
pub fn format_sig17(x: f64) -> String {
    format!("{x:.16e}")
}

pub(crate) type State = [f64; 8];

pub(crate) fn geodesic_rhs(metric: &MetricField, y: &State) -> Result<State> {
    let p = metric.point([y[0], y[1], y[2], y[3]])?;
    let gamma = christoffel(metric, &p)?;
    let u = [y[4], y[5], y[6], y[7]];
    let acc = gamma.contract(&u, &u);
    Ok([u[0], u[1], u[2], u[3], -acc[0], -acc[1], -acc[2], -acc[3]])
}

pub(crate) fn rk4_step<const N: usize, F>(f: &F, y: &[f64; N], h: f64) -> Result<[f64; N]>
where
    F: Fn(&[f64; N]) -> Result<[f64; N]>,
{
    let k1 = f(y)?;
    let y2 = std::array::from_fn(|i| y[i] + 0.5 * h * k1[i]);
    let k2 = f(&y2)?;
    let y3 = std::array::from_fn(|i| y[i] + 0.5 * h * k2[i]);
    let k3 = f(&y3)?;
    let y4 = std::array::from_fn(|i| y[i] + h * k3[i]);
    let k4 = f(&y4)?;
    Ok(std::array::from_fn(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])))
}

// Dormand–Prince 5(4) tableau.
const DP_A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const DP_B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const DP_B4: [f64; 7] =
    [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];

/// One Dormand–Prince step: fifth-order solution and scaled error norm.
fn dp_step<const N: usize, F>(f: &F, y: &[f64; N], h: f64, tol: f64) -> Result<([f64; N], f64)>
where
    F: Fn(&[f64; N]) -> Result<[f64; N]>,
{
    let mut k = [[0.0; N]; 7];
    for stage in 0..7 {
        let ys: [f64; N] =
            std::array::from_fn(|i| y[i] + h * (0..stage).map(|j| DP_A[stage][j] * k[j][i]).sum::<f64>());
        k[stage] = f(&ys)?;
    }
    let y5: [f64; N] = std::array::from_fn(|i| y[i] + h * (0..7).map(|j| DP_B5[j] * k[j][i]).sum::<f64>());
    let mut err = 0.0_f64;
    for i in 0..N {
        let e = h * (0..7).map(|j| (DP_B5[j] - DP_B4[j]) * k[j][i]).sum::<f64>();
        err = err.max(e.abs() / (tol * (1.0 + y[i].abs().max(y5[i].abs()))));
    }
    Ok((y5, err))
}

fn check_initial(metric: &MetricField, p0: &ChartPoint, v0: &Vec4) -> Result<()> {
    let g = metric.eval(p0)?;
    let norm = inner(&g, v0, v0);
    if !(norm > 0.0) || v0[0] <= 0.0 {
        return Err(Error::NotTimelike { point: p0.coords, norm });
    }
    if (norm - 1.0).abs() > UNIT_TOLERANCE {
        return Err(Error::NotUnit { point: p0.coords, defect: norm - 1.0 });
    }
    Ok(())
}

/// Integrate `D_σ̇ σ̇ = 0` from `p0` with unit velocity `v0` over `s ∈ [0, s_max]`.
///
/// A step that would leave the chart domain ends the path early with
/// [`Termination::LeftDomain`].
pub fn integrate_geodesic(
    metric: &MetricField,
    p0: &ChartPoint,
    v0: Vec4,
    s_max: f64,
    control: StepControl,
) -> Result<GeodesicPath> {
    if !(s_max > 0.0) {
        return Err(Error::InvalidParameter(format!("s_max = {s_max} must be positive")));
    }
    integrate_directed(metric, p0, v0, s_max, control)
}

/// Integrate over `s ∈ [s_min, s_max]` with `s_min ≤ 0 ≤ s_max`, both
/// directions from `p0`; the sample at `s = 0` is `p0` itself.
pub fn integrate_geodesic_span(
    metric: &MetricField,
    p0: &ChartPoint,
    v0: Vec4,
    s_min: f64,
    s_max: f64,
    control: StepControl,
) -> Result<GeodesicPath> {
    if !(s_min <= 0.0 && s_max >= 0.0) || s_min == s_max {
        return Err(Error::InvalidParameter(format!("span [{s_min}, {s_max}] must contain 0 and be non-empty")));
    }
    let forward = if s_max > 0.0 { Some(integrate_directed(metric, p0, v0, s_max, control)?) } else { None };
    let backward = if s_min < 0.0 { Some(integrate_directed(metric, p0, v0, s_min, control)?) } else { None };
    let mut samples = Vec::new();
    let mut stats = IntegratorStats::default();
    let mut termination = Termination::Completed;
    if let Some(b) = &backward {
        samples.extend(b.samples.iter().skip(1).rev().cloned());
        merge_stats(&mut stats, &b.stats);
        termination = b.termination.clone();
    }
    match &forward {
        Some(f) => {
            samples.extend(f.samples.iter().cloned());
            merge_stats(&mut stats, &f.stats);
            if f.termination != Termination::Completed {
                termination = f.termination.clone();
            }
        }
        None => samples.push(GeodesicSample { s: 0.0, point: p0.clone(), velocity: v0 }),
    }
    Ok(GeodesicPath {
        samples,
        metric_id: metric.name().to_string(),
        chart: metric.chart().clone(),
        stats,
        termination,
    })
}

fn merge_stats(into: &mut IntegratorStats, from: &IntegratorStats) {
    into.steps += from.steps;
    into.rejected_steps += from.rejected_steps;
    into.max_error_estimate = match (into.max_error_estimate, from.max_error_estimate) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (a, b) => a.or(b),
    };
}

/// Errors meaning the path has run off the region where the chart metric is
/// usable.
fn domain_exit(e: &Error) -> Option<String> {
    match e {
        Error::Domain(reason) => Some(reason.clone()),
        Error::SingularMetric(p) => Some(format!("metric numerically singular at {p:?}")),
        _ => None,
    }
}

fn integrate_directed(
    metric: &MetricField,
    p0: &ChartPoint,
    v0: Vec4,
    s_end: f64,
    control: StepControl,
) -> Result<GeodesicPath> {
    p0.expect_chart(metric.chart())?;
    metric.require_order(1)?;
    control.validate()?;
    if !s_end.is_finite() || s_end == 0.0 {
        return Err(Error::InvalidParameter(format!("proper-time extent {s_end} must be finite and non-zero")));
    }
    check_initial(metric, p0, &v0)?;
    let dir = s_end.signum();
    let rhs = |y: &State| geodesic_rhs(metric, y);
    let mut y: State = [p0.coords[0], p0.coords[1], p0.coords[2], p0.coords[3], v0[0], v0[1], v0[2], v0[3]];
    let mut s = 0.0_f64;
    let mut samples = vec![GeodesicSample { s, point: p0.clone(), velocity: v0 }];
    let mut stats = IntegratorStats::default();
    let mut termination = Termination::Completed;
    let push = |samples: &mut Vec<GeodesicSample>, s: f64, y: &State| -> Result<()> {
        samples.push(GeodesicSample {
            s,
            point: metric.point([y[0], y[1], y[2], y[3]])?,
            velocity: [y[4], y[5], y[6], y[7]],
        });
        Ok(())
    };
    match control {
        StepControl::Fixed { step } => {
            let n = ((s_end.abs() / step) - 1e-9).ceil().max(1.0);
            if n > MAX_STEPS as f64 {
                return Err(Error::StepUnderflow(step));
            }
            let n = n as usize;
            for k in 1..=n {
                let s_next = if k == n { s_end } else { dir * step * k as f64 };
                match rk4_step(&rhs, &y, s_next - s) {
                    Ok(next) => {
                        y = next;
                        s = s_next;
                        stats.steps += 1;
                        push(&mut samples, s, &y)?;
                    }
                    Err(e) => match domain_exit(&e) {
                        Some(reason) => {
                            termination = Termination::LeftDomain(reason);
                            break;
                        }
                        None => return Err(e),
                    },
                }
            }
        }
        StepControl::Adaptive { tolerance, initial_step, min_step } => {
            let mut h = initial_step.min(s_end.abs());
            let mut max_err = 0.0_f64;
            while (s_end - s) * dir > 0.0 {
                let remaining = (s_end - s).abs();
                let last = h >= remaining;
                let step = if last { remaining } else { h };
                match dp_step(&rhs, &y, dir * step, tolerance) {
                    Ok((next, err)) if err <= 1.0 => {
                        y = next;
                        s = if last { s_end } else { s + dir * step };
                        stats.steps += 1;
                        max_err = max_err.max(err * tolerance);
                        push(&mut samples, s, &y)?;
                        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                        h = step * factor;
                    }
                    Ok((_, err)) => {
                        stats.rejected_steps += 1;
                        h = step * (0.9 * err.powf(-0.2)).clamp(0.1, 0.5);
                    }
                    Err(e) => match domain_exit(&e) {
                        Some(reason) if step * 0.25 < min_step => {
                            termination = Termination::LeftDomain(reason);
                            break;
                        }
                        Some(_) => {
                            stats.rejected_steps += 1;
                            h = step * 0.25;
                        }
                        None => return Err(e),
                    },
                }
                if (h < min_step || stats.steps + stats.rejected_steps >= MAX_STEPS) && (s_end - s).abs() > min_step {
                    return Err(Error::StepUnderflow(h));
                }
            }
            stats.max_error_estimate = Some(max_err);
        }
    }
    Ok(GeodesicPath {
        samples,
        metric_id: metric.name().to_string(),
        chart: metric.chart().clone(),
        stats,
        termination,
    })
}
