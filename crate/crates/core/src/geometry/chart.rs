use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::tensor::Vec4;

/// Name of a coordinate chart. Points, metrics and frames carry one so that
/// components from different charts are never mixed silently.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChartId(Arc<str>);

impl ChartId {
    pub fn new(name: impl AsRef<str>) -> Self {
        ChartId(Arc::from(name.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for ChartId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl fmt::Display for ChartId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for ChartId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for ChartId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(ChartId::new(String::deserialize(d)?))
    }
}

/// Coordinates `(x⁰ = t, x¹, x², x³)` of a spacetime point in a named chart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartPoint {
    pub coords: Vec4,
    pub chart: ChartId,
}

impl ChartPoint {
    pub fn new(coords: Vec4, chart: ChartId) -> Result<Self> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite coordinates {coords:?}")));
        }
        Ok(ChartPoint { coords, chart })
    }

    pub fn t(&self) -> f64 {
        self.coords[0]
    }

    pub fn expect_chart(&self, chart: &ChartId) -> Result<()> {
        if &self.chart != chart {
            return Err(Error::ChartMismatch { expected: chart.clone(), found: self.chart.clone() });
        }
        Ok(())
    }

    /// Same chart, coordinates displaced by `delta`.
    pub fn offset(&self, delta: Vec4) -> Self {
        ChartPoint { coords: std::array::from_fn(|i| self.coords[i] + delta[i]), chart: self.chart.clone() }
    }
}
