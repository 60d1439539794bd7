//! Kinematic comparison of pairs of frames at a point.

use framekin::catalog::{boosted_inertial_frame, inertial_frame, make_friedmann, minkowski};
use framekin::equivalence::{equivalence_verdict, plli_frames, EQUIVALENCE_TOLERANCE};

fn main() -> framekin::Result<()> {
    let f = make_friedmann(1e-3, 0.1005)?;
    let p = f.metric.point([0.0; 4])?;
    let v = equivalence_verdict(&f.metric, &f.frame_v, &f.frame_z, &p, EQUIVALENCE_TOLERANCE)?;
    println!("V vs Z: {:?} ({:?}), ΔΘ = {:.3e}", v.verdict, v.dominant_discriminant, v.deltas.expansion);

    let (model, l, lp) = plli_frames(1e-3, 0.1)?;
    let v = equivalence_verdict(&model.metric, &l.frame, &lp.frame, &p, EQUIVALENCE_TOLERANCE)?;
    println!("L vs L′: {:?}, largest delta {:.3e}", v.verdict, v.deltas.max());

    let m = minkowski();
    let q = m.point([1.0, 2.0, 0.0, -1.0])?;
    let v = equivalence_verdict(&m, &inertial_frame(&m), &boosted_inertial_frame(&m, 0.8)?, &q, EQUIVALENCE_TOLERANCE)?;
    println!("I vs I′: {:?}", v.verdict);
    Ok(())
}
