//! Pushforward of tensors and frames along chart maps, symmetry tests and
//! the kinematic comparison of frames.

mod plli;
mod pushforward;
mod verdict;

pub use plli::{plli_expansion_pair, plli_frames, PlliExpansionPair, PLLI_HALF_SPAN, PLLI_STEP};
pub use pushforward::{
    check_diffeo, is_symmetry, push_frame, pushforward_tensor, symmetry_defect, DiffeoCheck, PushedFrame, TensorField,
    ZeroTensor, SYMMETRY_TOLERANCE,
};
pub use verdict::{
    equivalence_verdict, equivalence_verdict_with_mode, ComparisonMode, Discriminant, EquivalenceVerdict,
    InvariantDeltas, Verdict, EQUIVALENCE_TOLERANCE,
};
