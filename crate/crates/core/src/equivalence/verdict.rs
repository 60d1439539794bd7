use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frames::{kinematic_decompose, FrameField, KinematicDecomposition};
use crate::geometry::{ChartPoint, MetricField};

/// Default threshold on invariant differences.
pub const EQUIVALENCE_TOLERANCE: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Equivalent,
    NotEquivalent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComparisonMode {
    /// Compare `Θ`, `σ`, `ω` and `|a|`.
    Invariants,
    /// Also compare `D_μ Q_ν` component by component in the shared chart.
    Strict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Discriminant {
    Expansion,
    Shear,
    Vorticity,
    Acceleration,
    Components,
}

impl fmt::Display for Discriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Discriminant::Expansion => "expansion",
            Discriminant::Shear => "shear",
            Discriminant::Vorticity => "vorticity",
            Discriminant::Acceleration => "acceleration",
            Discriminant::Components => "components",
        };
        f.write_str(s)
    }
}

/// Absolute differences of the kinematic invariants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvariantDeltas {
    pub expansion: f64,
    pub shear: f64,
    pub vorticity: f64,
    pub acceleration: f64,
}

impl InvariantDeltas {
    fn between(a: &KinematicDecomposition, b: &KinematicDecomposition) -> Self {
        InvariantDeltas {
            expansion: (a.expansion - b.expansion).abs(),
            shear: (a.shear_scalar() - b.shear_scalar()).abs(),
            vorticity: (a.vorticity_scalar() - b.vorticity_scalar()).abs(),
            acceleration: (a.acceleration_magnitude() - b.acceleration_magnitude()).abs(),
        }
    }

    fn ranked(&self) -> [(Discriminant, f64); 4] {
        [
            (Discriminant::Expansion, self.expansion),
            (Discriminant::Shear, self.shear),
            (Discriminant::Vorticity, self.vorticity),
            (Discriminant::Acceleration, self.acceleration),
        ]
    }

    pub fn max(&self) -> f64 {
        self.ranked().iter().fold(0.0_f64, |m, (_, d)| m.max(*d))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceVerdict {
    pub verdict: Verdict,
    /// First of expansion, shear, vorticity, acceleration (then components,
    /// in strict mode) whose delta exceeds the tolerance.
    pub dominant_discriminant: Option<Discriminant>,
    pub deltas: InvariantDeltas,
    /// `max |D_μ Q_ν - D_μ Q̄_ν|`, strict mode only.
    pub component_delta: Option<f64>,
    pub tolerance: f64,
    pub mode: ComparisonMode,
    pub evidence: [KinematicDecomposition; 2],
}

/// Compare the kinematics of two frames of `metric` at `p`.
pub fn equivalence_verdict(
    metric: &MetricField,
    frame_a: &FrameField,
    frame_b: &FrameField,
    p: &ChartPoint,
    tolerance: f64,
) -> Result<EquivalenceVerdict> {
    equivalence_verdict_with_mode(metric, frame_a, frame_b, p, tolerance, ComparisonMode::Invariants)
}

pub fn equivalence_verdict_with_mode(
    metric: &MetricField,
    frame_a: &FrameField,
    frame_b: &FrameField,
    p: &ChartPoint,
    tolerance: f64,
    mode: ComparisonMode,
) -> Result<EquivalenceVerdict> {
    if !(tolerance > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance {tolerance} must be positive")));
    }
    let a = kinematic_decompose(metric, frame_a, p)?;
    let b = kinematic_decompose(metric, frame_b, p)?;
    let deltas = InvariantDeltas::between(&a, &b);
    let component_delta = match mode {
        ComparisonMode::Invariants => None,
        ComparisonMode::Strict => {
            Some(crate::tensor::max_abs_diff_mat(&a.covariant_derivative, &b.covariant_derivative))
        }
    };
    let dominant_discriminant = deltas
        .ranked()
        .iter()
        .find(|(_, d)| *d > tolerance)
        .map(|(k, _)| *k)
        .or_else(|| component_delta.filter(|d| *d > tolerance).map(|_| Discriminant::Components));
    let verdict = if dominant_discriminant.is_some() { Verdict::NotEquivalent } else { Verdict::Equivalent };
    Ok(EquivalenceVerdict {
        verdict,
        dominant_discriminant,
        deltas,
        component_delta,
        tolerance,
        mode,
        evidence: [a, b],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{boosted_inertial_frame, inertial_frame, make_friedmann, minkowski, rotating_minkowski_frame};

    #[test]
    fn friedmann_v_and_z_differ_in_expansion() {
        let f = make_friedmann(1e-3, 0.1005).unwrap();
        let p = f.metric.point([0.0; 4]).unwrap();
        let v = equivalence_verdict(&f.metric, &f.frame_v, &f.frame_z, &p, EQUIVALENCE_TOLERANCE).unwrap();
        assert_eq!(v.verdict, Verdict::NotEquivalent);
        assert_eq!(v.dominant_discriminant, Some(Discriminant::Expansion));
        let w = equivalence_verdict(&f.metric, &f.frame_z, &f.frame_v, &p, EQUIVALENCE_TOLERANCE).unwrap();
        assert_eq!(w.deltas, v.deltas);
    }

    #[test]
    fn inertial_frames_are_equivalent() {
        let m = minkowski();
        let p = m.point([0.3, 1.0, -2.0, 0.5]).unwrap();
        let i = inertial_frame(&m);
        let j = boosted_inertial_frame(&m, 0.7).unwrap();
        let v = equivalence_verdict(&m, &i, &j, &p, EQUIVALENCE_TOLERANCE).unwrap();
        assert_eq!(v.verdict, Verdict::Equivalent);
        assert_eq!(v.dominant_discriminant, None);
        let s = equivalence_verdict_with_mode(&m, &i, &j, &p, EQUIVALENCE_TOLERANCE, ComparisonMode::Strict).unwrap();
        assert_eq!(s.verdict, Verdict::Equivalent);
        let r = rotating_minkowski_frame(0.1, 5.0).unwrap();
        let p1 = m.point([0.0, 1.0, 0.0, 0.0]).unwrap();
        let v = equivalence_verdict(&m, &i, &r, &p1, EQUIVALENCE_TOLERANCE).unwrap();
        assert_eq!(v.verdict, Verdict::NotEquivalent);
        assert!(equivalence_verdict(&m, &i, &r, &m.point([0.0, 6.0, 0.0, 0.0]).unwrap(), 1e-7).is_err());
        assert!(equivalence_verdict(&m, &i, &j, &p, 0.0).is_err());
    }
}
