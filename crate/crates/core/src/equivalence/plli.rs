use serde::Serialize;

use crate::catalog::{make_friedmann, u_from_v, FriedmannModel};
use crate::error::{Error, Result};
use crate::geodesic::{diagonal_tetrad, integrate_geodesic_span, tetrad_from_velocity, StepControl};
use crate::geometry::ChartPoint;
use crate::normal::{llrf_along_geodesic, llrf_expansion, LLRFFrame, LlrfExpansion};

/// Proper-time half-length of the two geodesics around `p`.
pub const PLLI_HALF_SPAN: f64 = 0.1;
/// Fixed step for the two geodesics.
pub const PLLI_STEP: f64 = 1e-3;

/// `Θ_L` and `Θ_L′` at the point `p` where the comoving line `γ` and the
/// integral line `γ′` of `Z` cross.
#[derive(Debug, Clone, Serialize)]
pub struct PlliExpansionPair {
    pub a: f64,
    pub v: f64,
    pub u: f64,
    pub point: ChartPoint,
    pub theta_l: f64,
    pub theta_lprime: f64,
    /// `Θ_L′ / (a v²)`, `None` when `a = 0`.
    pub ratio_to_av2: Option<f64>,
    pub l: LlrfExpansion,
    pub lprime: LlrfExpansion,
}

/// The two tube frames at the origin of the Friedmann model with expansion
/// `a` and relative speed `v`.
pub fn plli_frames(a: f64, v: f64) -> Result<(FriedmannModel, LLRFFrame, LLRFFrame)> {
    build(a, v, true)
}

fn build(a: f64, v: f64, threaded: bool) -> Result<(FriedmannModel, LLRFFrame, LLRFFrame)> {
    if !(v > 0.0 && v < 1.0) {
        return Err(Error::InvalidParameter(format!("v = {v} must lie in (0, 1)")));
    }
    let model = make_friedmann(a, u_from_v(v)?)?;
    let metric = &model.metric;
    let p = metric.point([0.0; 4])?;
    let g = metric.eval(&p)?;
    let along = |velocity: [f64; 4], tetrad: [[f64; 4]; 4]| -> Result<LLRFFrame> {
        let path = integrate_geodesic_span(
            metric,
            &p,
            velocity,
            -PLLI_HALF_SPAN,
            PLLI_HALF_SPAN,
            StepControl::fixed(PLLI_STEP),
        )?;
        // Carry the tetrad from p back to the start of the path.
        let mut back = path.clone();
        back.samples.retain(|smp| smp.s <= 0.0);
        let start_tetrad = reverse_tetrad(metric, &back, tetrad)?;
        llrf_along_geodesic(metric, &path, start_tetrad)
    };
    let z = model.frame_z.eval(&p)?;
    let e_gamma = diagonal_tetrad(&g)?;
    let e_gamma_prime = tetrad_from_velocity(&g, &z)?;
    let (l, lprime) = if threaded {
        std::thread::scope(|s| {
            let h = s.spawn(|| along([1.0, 0.0, 0.0, 0.0], e_gamma));
            let lp = along(z, e_gamma_prime);
            (h.join().expect("tube construction thread panicked"), lp)
        })
    } else {
        (along([1.0, 0.0, 0.0, 0.0], e_gamma), along(z, e_gamma_prime))
    };
    Ok((model, l?, lprime?))
}

/// Transport `tetrad`, given at the last sample of `back`, to its first.
fn reverse_tetrad(
    metric: &crate::geometry::MetricField,
    back: &crate::geodesic::GeodesicPath,
    tetrad: [[f64; 4]; 4],
) -> Result<[[f64; 4]; 4]> {
    let mut rev = back.clone();
    rev.samples.reverse();
    for smp in &mut rev.samples {
        smp.s = -smp.s;
        smp.velocity = smp.velocity.map(|c| -c);
    }
    let mut flipped = tetrad;
    flipped[0] = flipped[0].map(|c| -c);
    let t = crate::geodesic::parallel_transport_tetrad(metric, &rev, flipped)?;
    let mut out = *t.tetrads.last().ok_or(Error::EmptySamples)?;
    out[0] = out[0].map(|c| -c);
    Ok(out)
}

/// End-to-end: model, both geodesics through `p`, both tube frames, and
/// their expansions at `p`. The two frames are built on separate threads.
pub fn plli_expansion_pair(a: f64, v: f64) -> Result<PlliExpansionPair> {
    finish(a, v, build(a, v, true)?)
}

fn finish(a: f64, v: f64, (model, l, lprime): (FriedmannModel, LLRFFrame, LLRFFrame)) -> Result<PlliExpansionPair> {
    let p = model.metric.point([0.0; 4])?;
    let el = llrf_expansion(&model.metric, &l, &p)?;
    let elp = llrf_expansion(&model.metric, &lprime, &p)?;
    let ratio_to_av2 = if a > 0.0 { Some(elp.normalized / (a * v * v)) } else { None };
    Ok(PlliExpansionPair {
        a,
        v,
        u: model.u,
        point: p,
        theta_l: el.normalized,
        theta_lprime: elp.normalized,
        ratio_to_av2,
        l: el,
        lprime: elp,
    })
}
