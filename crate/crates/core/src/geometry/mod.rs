//! Metrics, Levi-Civita connection and curvature in a chart.

mod chart;
mod connection;
mod covariant;
mod curvature;
mod map;
mod metric;

pub use chart::{ChartId, ChartPoint};
pub(crate) use connection::contract_gamma;
pub use connection::{christoffel, christoffel_with_derivative, ConnectionCoefficients};
pub use covariant::{covariant_derivative_field, self_acceleration};
pub use curvature::{curvature_contractions, riemann, CurvatureTensor};
pub(crate) use map::inverse_jacobian_jets;
pub use map::{
    compose_taylor, forward_hessian, invert_two_jet, push_metric, AffineMap, ChartMap, ComposedMap, InverseMap,
    PushedMetric,
};
pub use metric::{
    check_lorentzian, eval_metric, inverse_metric, ConstantMetric, MetricComponents, MetricField, MetricJet,
};
