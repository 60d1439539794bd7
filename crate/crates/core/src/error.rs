use thiserror::Error;

use crate::geometry::ChartId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A point fell outside the domain where a chart or model is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("point lives in chart `{found}` but `{expected}` was required")]
    ChartMismatch { expected: ChartId, found: ChartId },

    #[error("metric is singular at {0:?}")]
    SingularMetric([f64; 4]),

    #[error("metric is not Lorentzian (+,-,-,-) at {point:?}: {detail}")]
    Signature { point: [f64; 4], detail: String },

    #[error("metric `{metric}` provides derivatives up to order {available}, {required} needed")]
    DerivativeOrder { metric: String, available: u8, required: u8 },

    #[error("vector is not timelike future-pointing at {point:?} (g(Q,Q) = {norm})")]
    NotTimelike { point: [f64; 4], norm: f64 },

    #[error("frame is not unit at {point:?}: g(Q,Q) - 1 = {defect:e}")]
    NotUnit { point: [f64; 4], defect: f64 },

    #[error("tetrad is not orthonormal: max deviation {0:e}")]
    NotOrthonormal(f64),

    #[error("sample set is empty")]
    EmptySamples,

    #[error("point {point:?} lies outside the chart tube of radius {radius}")]
    OutsideTube { point: [f64; 4], radius: f64 },

    #[error("step size underflow at s = {0}")]
    StepUnderflow(f64),

    #[error("tensor shape mismatch: {0}")]
    Shape(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("non-finite value produced: {0}")]
    NonFinite(String),
}

impl Error {
    /// True for errors caused by bad input rather than numerical breakdown.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter(_)
                | Error::Shape(_)
                | Error::EmptySamples
                | Error::ChartMismatch { .. }
                | Error::NotOrthonormal(_)
        )
    }
}
