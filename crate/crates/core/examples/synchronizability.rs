//! Synchronizability classes and the free-fall test on a sample grid.

use framekin::catalog::{make_friedmann, minkowski, rotating_minkowski_frame};
use framekin::frames::{classify_synchronizability, is_pirf, SampleSet};

fn main() -> framekin::Result<()> {
    let f = make_friedmann(1e-3, 0.1005)?;
    let grid = SampleSet::default_grid(&f.metric.point([0.0; 4])?, 0.5)?;
    for frame in [&f.frame_v, &f.frame_z] {
        let class = classify_synchronizability(&f.metric, frame, &grid)?.class;
        let pirf = is_pirf(&f.metric, frame, &grid.points, 1e-8)?;
        println!("{}: {class:?}, free fall and twist-free: {}", frame.label(), pirf.is_pirf);
    }

    let m = minkowski();
    let rot = rotating_minkowski_frame(0.1, 5.0)?;
    let grid = SampleSet::default_grid(&m.point([0.0, 1.0, 0.5, 0.0])?, 0.5)?;
    let report = classify_synchronizability(&m, &rot, &grid)?;
    println!("rotating: {:?}, max |α∧dα| = {:.3e}", report.class, report.max_alpha_wedge_d_alpha);
    Ok(())
}
