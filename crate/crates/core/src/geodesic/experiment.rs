//! Free-particle launches at the origin of the chart adapted to `Z`.
//!
//! Case (a) launches along `x¹′` with `dx¹′/dt′ = v`, case (b) along `x²′`
//! with `dx²′/dt′ = v`. The accelerations `d²x′/ds²` at launch are the
//! geodesic right-hand sides `-Γ^i_{αβ} U^α U^β`.

use serde::Serialize;

use crate::catalog::{make_friedmann, z_chart_metric};
use crate::error::{Error, Result};
use crate::geometry::{christoffel, MetricField};
use crate::tensor::{inner, Vec4};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LaunchCase {
    /// Along `x¹′`, the direction of motion of `Z` relative to `V`.
    A,
    /// Along `x²′`, transverse.
    B,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub case: LaunchCase,
    /// `(dx¹′/dt′, dx²′/dt′)` at launch.
    pub initial_speeds: [f64; 2],
    /// Unit four-velocity at launch in the adapted chart.
    pub velocity: Vec4,
    /// `(d²x¹′/ds², d²x²′/ds²)`
    pub accelerations: [f64; 2],
    /// `d²t′/ds²`
    pub time_acceleration: f64,
    /// `dt′/ds`, converting the proper-time accelerations to coordinate time.
    pub dt_ds: f64,
    /// `|‖acc_a‖ - ‖acc_b‖|`, identical in both reports of a pair.
    pub asymmetry: f64,
}

impl ExperimentReport {
    pub fn acceleration_norm(&self) -> f64 {
        self.accelerations[0].hypot(self.accelerations[1])
    }
}

/// Unit four-velocity with coordinate speeds `dx^i/dt = speeds[i-1]`.
pub fn launch_velocity(g: &[[f64; 4]; 4], speeds: [f64; 3]) -> Result<Vec4> {
    let dir = [1.0, speeds[0], speeds[1], speeds[2]];
    let n = inner(g, &dir, &dir);
    if !(n > 0.0) {
        return Err(Error::InvalidParameter(format!("launch speeds {speeds:?} are not timelike")));
    }
    Ok(dir.map(|c| c / n.sqrt()))
}

fn launch(metric: &MetricField, case: LaunchCase, v: f64) -> Result<ExperimentReport> {
    let p0 = metric.point([0.0; 4])?;
    let g = metric.eval(&p0)?;
    let speeds = match case {
        LaunchCase::A => [v, 0.0, 0.0],
        LaunchCase::B => [0.0, v, 0.0],
    };
    let u = launch_velocity(&g, speeds)?;
    let acc = christoffel(metric, &p0)?.contract(&u, &u);
    Ok(ExperimentReport {
        case,
        initial_speeds: [speeds[0], speeds[1]],
        velocity: u,
        accelerations: [-acc[1], -acc[2]],
        time_acceleration: -acc[0],
        dt_ds: u[0],
        asymmetry: 0.0,
    })
}

/// Run both launches with speed `v_probe` in the Friedmann model with
/// expansion `a_param` and `Z` parameter `u_param`.
pub fn free_particle_experiment(
    a_param: f64,
    u_param: f64,
    v_probe: f64,
) -> Result<(ExperimentReport, ExperimentReport)> {
    if !(v_probe > 0.0 && v_probe < 1.0) {
        return Err(Error::InvalidParameter(format!("probe speed {v_probe} must lie in (0, 1)")));
    }
    let model = make_friedmann(a_param, u_param)?;
    let metric = z_chart_metric(&model);
    let mut a = launch(&metric, LaunchCase::A, v_probe)?;
    let mut b = launch(&metric, LaunchCase::B, v_probe)?;
    let asym = (a.acceleration_norm() - b.acceleration_norm()).abs();
    a.asymmetry = asym;
    b.asymmetry = asym;
    Ok((a, b))
}
