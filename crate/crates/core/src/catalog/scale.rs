use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hyperdual::HyperDual;

/// Scale factor `R(t)` of a spatially flat Friedmann metric.
pub trait ScaleFactor: Send + Sync + fmt::Debug {
    /// `R` evaluated on a jet of `t`; errors where `R ≤ 0`.
    fn eval(&self, t: HyperDual) -> Result<HyperDual>;

    /// `(R, Ṙ, R̈)` at `t`.
    fn derivatives(&self, t: f64) -> Result<(f64, f64, f64)> {
        let r = self.eval(HyperDual::variable(t, 0))?;
        Ok((r.re, r.grad[0], r.hess[0][0]))
    }

    /// Infimum of the time domain.
    fn domain_start(&self) -> f64;
}

/// `R(t) = 1 + a t`, so `R(0) = 1`, `Ṙ = a`, `R̈ = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearScale {
    pub a: f64,
}

impl LinearScale {
    pub fn new(a: f64) -> Result<Self> {
        if !(a >= 0.0) || !a.is_finite() {
            return Err(Error::InvalidParameter(format!("expansion parameter a = {a} must be finite and >= 0")));
        }
        Ok(LinearScale { a })
    }
}

impl ScaleFactor for LinearScale {
    fn eval(&self, t: HyperDual) -> Result<HyperDual> {
        let r = t * self.a + 1.0;
        if !(r.re > 0.0) {
            return Err(Error::Domain(format!("R(t) = {} <= 0 at t = {} (a = {})", r.re, t.re, self.a)));
        }
        Ok(r)
    }

    fn domain_start(&self) -> f64 {
        if self.a > 0.0 {
            -1.0 / self.a
        } else {
            f64::NEG_INFINITY
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_scale_values_and_domain() {
        let s = LinearScale::new(0.5).unwrap();
        assert_eq!(s.derivatives(1.0).unwrap(), (1.5, 0.5, 0.0));
        assert_eq!(s.derivatives(0.0).unwrap().0, 1.0);
        assert!(matches!(s.derivatives(-2.0), Err(Error::Domain(_))));
        assert!(matches!(s.derivatives(-3.0), Err(Error::Domain(_))));
        assert!(LinearScale::new(-1e-3).is_err());
        assert!(LinearScale::new(f64::NAN).is_err());
    }
}
