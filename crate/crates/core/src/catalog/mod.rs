//! Model zoo: Minkowski space with inertial, boosted and rotating frames, and
//! the spatially flat Friedmann model with its frames `V`, `Z` and the chart
//! adapted to `Z`.

mod friedmann;
mod minkowski;
mod scale;
mod zchart;

use serde::{Deserialize, Serialize};

pub use friedmann::{make_friedmann, u_from_v, v_from_u, FriedmannMetric, FriedmannModel, ZComponents, COMOVING_CHART};
pub use minkowski::{
    boosted_inertial_frame, inertial_frame, minkowski, rotating_minkowski_frame, RotatingComponents, INERTIAL_CHART,
};
pub use scale::{LinearScale, ScaleFactor};
pub use zchart::{z_chart, z_chart_metric, ZChart, ZChartMetric, Z_CHART, Z_CHART_TOLERANCE};

use crate::error::{Error, Result};
use crate::frames::FrameField;
use crate::geometry::MetricField;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Minkowski,
    Friedmann,
}

/// Model selection as read from a JSON file, e.g.
/// `{"model":"friedmann","a":1e-3,"u":0.1005}` or
/// `{"model":"minkowski","frame":"rotating","omega":0.1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ModelConfig {
    pub model: ModelKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius_cap: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boost: Option<f64>,
}

/// Radius cap used for rotating frames when none is given.
pub const DEFAULT_RADIUS_CAP: f64 = 5.0;

#[derive(Debug, Clone)]
pub enum Model {
    Minkowski(MetricField),
    Friedmann(Box<FriedmannModel>),
}

impl Model {
    pub fn metric(&self) -> &MetricField {
        match self {
            Model::Minkowski(m) => m,
            Model::Friedmann(f) => &f.metric,
        }
    }

    pub fn friedmann(&self) -> Option<&FriedmannModel> {
        match self {
            Model::Friedmann(f) => Some(f),
            Model::Minkowski(_) => None,
        }
    }
}

impl ModelConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidParameter(format!("model config: {e}")))
    }

    pub fn build(&self) -> Result<Model> {
        match self.model {
            ModelKind::Minkowski => {
                if self.a.is_some() || self.u.is_some() {
                    return Err(Error::InvalidParameter("minkowski takes no `a` or `u`".into()));
                }
                Ok(Model::Minkowski(minkowski()))
            }
            ModelKind::Friedmann => {
                Ok(Model::Friedmann(Box::new(make_friedmann(self.a.unwrap_or(0.0), self.u.unwrap_or(0.0))?)))
            }
        }
    }

    /// The frame named by `frame`, defaulting to `I` on Minkowski and `V` on
    /// Friedmann.
    pub fn build_frame(&self, model: &Model) -> Result<FrameField> {
        frame_by_name(model, self.frame.as_deref(), self.omega, self.radius_cap, self.boost)
    }
}

/// Look up a catalog frame by name: `inertial`, `boosted`, `rotating` on
/// Minkowski; `V`, `Z` on Friedmann.
pub fn frame_by_name(
    model: &Model,
    name: Option<&str>,
    omega: Option<f64>,
    radius_cap: Option<f64>,
    boost: Option<f64>,
) -> Result<FrameField> {
    match (model, name.map(str::to_ascii_lowercase).as_deref()) {
        (Model::Minkowski(m), None | Some("inertial") | Some("i")) => Ok(inertial_frame(m)),
        (Model::Minkowski(m), Some("boosted")) => boosted_inertial_frame(m, boost.unwrap_or(0.5)),
        (Model::Minkowski(_), Some("rotating")) => {
            rotating_minkowski_frame(omega.unwrap_or(0.1), radius_cap.unwrap_or(DEFAULT_RADIUS_CAP))
        }
        (Model::Friedmann(f), None | Some("v")) => Ok(f.frame_v.clone()),
        (Model::Friedmann(f), Some("z")) => Ok(f.frame_z.clone()),
        (_, Some(other)) => Err(Error::InvalidParameter(format!("unknown frame `{other}` for this model"))),
    }
}
