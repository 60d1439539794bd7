//! Reference frames, their kinematics and the comparison of local Lorentz
//! frames in Lorentzian spacetimes, with Minkowski and spatially flat
//! Friedmann models as the worked catalog.
//!
//! Metrics are evaluated on [`HyperDual`] numbers so connection and curvature
//! come out with exact derivatives. Sign conventions: signature `(+,-,-,-)`,
//! Riemann tensor as documented in [`geometry`].

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod cli;
pub mod equivalence;
pub mod error;
pub mod frames;
pub mod geodesic;
pub mod geometry;
pub mod hyperdual;
pub mod normal;
pub mod numerics;
pub mod scenario;
pub mod tensor;

pub use error::{Error, Result};
pub use hyperdual::HyperDual;
