//! Expansion, shear, vorticity and acceleration of a few frames.

use framekin::catalog::{make_friedmann, minkowski, rotating_minkowski_frame};
use framekin::frames::{kinematic_decompose, FrameField};
use framekin::geometry::{ChartPoint, MetricField};

fn show(metric: &MetricField, frame: &FrameField, p: &ChartPoint) -> framekin::Result<()> {
    let d = kinematic_decompose(metric, frame, p)?;
    println!(
        "{:<10} Θ = {:>12.5e}  σ = {:>12.5e}  ω = {:>12.5e}  |a| = {:>12.5e}",
        frame.label(),
        d.expansion,
        d.shear_scalar(),
        d.vorticity_scalar(),
        d.acceleration_magnitude()
    );
    Ok(())
}

fn main() -> framekin::Result<()> {
    let f = make_friedmann(1e-3, 0.1005)?;
    let p = f.metric.point([0.0; 4])?;
    println!("Friedmann a = 1e-3, u = 0.1005 at the origin");
    show(&f.metric, &f.frame_v, &p)?;
    show(&f.metric, &f.frame_z, &p)?;

    let m = minkowski();
    let rot = rotating_minkowski_frame(0.1, 5.0)?;
    println!("Minkowski, r = 1");
    show(&m, &rot, &m.point([0.0, 1.0, 0.0, 0.0])?)?;
    Ok(())
}
