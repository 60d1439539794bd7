//! Unit timelike frame fields, their kinematic decomposition and
//! classification.

mod field;
mod kinematics;
mod sync;

pub use field::{make_frame, Coframe, ConstantVector, FrameField, VectorComponents, UNIT_TOLERANCE};
pub use kinematics::{kinematic_decompose, KinematicDecomposition};
pub use sync::{
    classify_synchronizability, coframe_forms, is_pirf, FormSample, PirfReport, SampleSet, SynchronizabilityClass,
    SynchronizabilityReport, FORM_ZERO_THRESHOLD,
};
