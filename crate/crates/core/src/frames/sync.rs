use serde::Serialize;

use crate::error::{Error, Result};
use crate::frames::FrameField;
use crate::geometry::{self_acceleration, ChartId, ChartPoint, MetricField};
use crate::hyperdual::HyperDual;
use crate::tensor::{Mat4, Tensor3, Vec4};

/// A form counts as zero when its largest component over the sample set is
/// below this, in chart units.
pub const FORM_ZERO_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SynchronizabilityClass {
    ProperTimeSynchronizable,
    Synchronizable,
    LocallyProperTimeSynchronizable,
    LocallySynchronizable,
    NonSynchronizable,
}

/// Points a classification is decided on.
///
/// A grid spans a coordinate box, which is contractible, so closed forms on it
/// are exact and integrable forms admit an integrating factor there. Scattered
/// points only support the local classes.
#[derive(Debug, Clone)]
pub struct SampleSet {
    pub points: Vec<ChartPoint>,
    pub spans_region: bool,
}

impl SampleSet {
    pub fn points(points: Vec<ChartPoint>) -> Self {
        SampleSet { points, spans_region: false }
    }

    /// `n` points per axis on the closed box `[lo, hi]`.
    pub fn grid(chart: &ChartId, lo: Vec4, hi: Vec4, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptySamples);
        }
        let coord = |axis: usize, k: usize| {
            if n == 1 {
                0.5 * (lo[axis] + hi[axis])
            } else {
                lo[axis] + (hi[axis] - lo[axis]) * k as f64 / (n - 1) as f64
            }
        };
        let mut points = Vec::with_capacity(n.pow(4));
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let c = [coord(0, i), coord(1, j), coord(2, k), coord(3, l)];
                        points.push(ChartPoint::new(c, chart.clone())?);
                    }
                }
            }
        }
        Ok(SampleSet { points, spans_region: n > 1 })
    }

    /// The default 3×3×3×3 grid on a box centred at `center`.
    pub fn default_grid(center: &ChartPoint, half_width: f64) -> Result<Self> {
        let lo = center.coords.map(|c| c - half_width);
        let hi = center.coords.map(|c| c + half_width);
        Self::grid(&center.chart, lo, hi, 3)
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct FormSample {
    pub point: Vec4,
    /// max |dα_{μν}|
    pub d_alpha: f64,
    /// max |(α∧dα)_{λμν}|
    pub alpha_wedge_d_alpha: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SynchronizabilityReport {
    pub class: SynchronizabilityClass,
    pub max_d_alpha: f64,
    pub max_alpha_wedge_d_alpha: f64,
    pub threshold: f64,
    pub samples: Vec<FormSample>,
}

/// `(α_μ, dα_{μν}, (α∧dα)_{λμν})` at `p`.
pub fn coframe_forms(frame: &FrameField, p: &ChartPoint) -> Result<(Vec4, Mat4, Tensor3)> {
    p.expect_chart(frame.chart())?;
    let x = HyperDual::seed(p.coords);
    let q = frame.components_jet(&x)?;
    let g = frame.metric().components_jet(&x)?;
    let alpha: [HyperDual; 4] = std::array::from_fn(|m| (0..4).map(|n| g[m][n] * q[n]).sum());
    let a: Vec4 = HyperDual::values(&alpha);
    let d: [[f64; 4]; 4] = std::array::from_fn(|m| std::array::from_fn(|n| alpha[n].grad[m] - alpha[m].grad[n]));
    let w = std::array::from_fn(|l| {
        std::array::from_fn(|m| std::array::from_fn(|n| a[l] * d[m][n] + a[m] * d[n][l] + a[n] * d[l][m]))
    });
    Ok((a, d, w))
}

fn form_sample(frame: &FrameField, p: &ChartPoint) -> Result<FormSample> {
    let (_, d, w) = coframe_forms(frame, p)?;
    Ok(FormSample {
        point: p.coords,
        d_alpha: crate::tensor::max_abs(d.iter().flatten()),
        alpha_wedge_d_alpha: crate::tensor::max_abs(w.iter().flatten().flatten()),
    })
}

pub fn classify_synchronizability(
    metric: &MetricField,
    frame: &FrameField,
    samples: &SampleSet,
) -> Result<SynchronizabilityReport> {
    if samples.points.is_empty() {
        return Err(Error::EmptySamples);
    }
    if metric.chart() != frame.chart() {
        return Err(Error::ChartMismatch { expected: metric.chart().clone(), found: frame.chart().clone() });
    }
    let evidence = samples.points.iter().map(|p| form_sample(frame, p)).collect::<Result<Vec<_>>>()?;
    let max_d = evidence.iter().fold(0.0_f64, |m, s| m.max(s.d_alpha));
    let max_w = evidence.iter().fold(0.0_f64, |m, s| m.max(s.alpha_wedge_d_alpha));
    let class = match (max_d < FORM_ZERO_THRESHOLD, max_w < FORM_ZERO_THRESHOLD, samples.spans_region) {
        (true, _, true) => SynchronizabilityClass::ProperTimeSynchronizable,
        (true, _, false) => SynchronizabilityClass::LocallyProperTimeSynchronizable,
        (false, true, true) => SynchronizabilityClass::Synchronizable,
        (false, true, false) => SynchronizabilityClass::LocallySynchronizable,
        (false, false, _) => SynchronizabilityClass::NonSynchronizable,
    };
    Ok(SynchronizabilityReport {
        class,
        max_d_alpha: max_d,
        max_alpha_wedge_d_alpha: max_w,
        threshold: FORM_ZERO_THRESHOLD,
        samples: evidence,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PirfReport {
    pub is_pirf: bool,
    /// max over samples of max |(D_Q Q)^μ|
    pub max_self_acceleration: f64,
    pub max_alpha_wedge_d_alpha: f64,
    pub tolerance: f64,
    pub samples: usize,
}

/// Pseudo-inertial test: free fall and no twist at every sample.
pub fn is_pirf(metric: &MetricField, frame: &FrameField, samples: &[ChartPoint], tolerance: f64) -> Result<PirfReport> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let mut max_acc = 0.0_f64;
    let mut max_w = 0.0_f64;
    for p in samples {
        let acc = self_acceleration(metric, frame, p)?;
        max_acc = max_acc.max(crate::tensor::max_abs(acc.iter()));
        max_w = max_w.max(form_sample(frame, p)?.alpha_wedge_d_alpha);
    }
    Ok(PirfReport {
        is_pirf: max_acc < tolerance && max_w < tolerance,
        max_self_acceleration: max_acc,
        max_alpha_wedge_d_alpha: max_w,
        tolerance,
        samples: samples.len(),
    })
}
