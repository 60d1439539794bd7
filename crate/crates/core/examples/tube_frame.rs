//! The frame `∂/∂τ` of coordinates built around a comoving geodesic.

use framekin::catalog::make_friedmann;
use framekin::geodesic::{diagonal_tetrad, integrate_geodesic, StepControl};
use framekin::normal::{llrf_along_geodesic, llrf_decomposition, llrf_expansion};

fn main() -> framekin::Result<()> {
    let model = make_friedmann(0.1, 0.0)?;
    let p0 = model.metric.point([0.0; 4])?;
    let path = integrate_geodesic(&model.metric, &p0, [1.0, 0.0, 0.0, 0.0], 2.0, StepControl::fixed(1e-2))?;
    let tetrad = diagonal_tetrad(&model.metric.eval(&p0)?)?;
    let l = llrf_along_geodesic(&model.metric, &path, tetrad)?;
    println!("transport defect {:.2e}", l.transported.max_orthonormality_defect);

    for x in [0.0, 0.02, 0.04] {
        let p = model.metric.point([1.0, x, 0.0, 0.0])?;
        let e = llrf_expansion(&model.metric, &l, &p)?;
        let d = llrf_decomposition(&model.metric, &l, &p)?;
        println!(
            "x = {x}: Θ = {:>11.3e} (raw {:>11.3e})  |D_L L| = {:.3e}",
            e.normalized,
            e.raw,
            d.acceleration_magnitude()
        );
    }
    let v = framekin::frames::kinematic_decompose(&model.metric, &model.frame_v, &p0)?;
    println!("comoving frame at the same point: Θ = {:.3e}", v.expansion);
    Ok(())
}
