//! Two free particles launched along and across the motion of `Z`.

use framekin::geodesic::free_particle_experiment;

fn main() -> framekin::Result<()> {
    let (ra, rb) = free_particle_experiment(1e-3, 0.1005, 0.01)?;
    for r in [&ra, &rb] {
        println!("case {:?}: d²x′/ds² = {:?}", r.case, r.accelerations);
    }
    println!("asymmetry {:.6e}", ra.asymmetry);
    for a in [1e-3, 1e-4, 1e-5] {
        println!("a = {a:e}: asymmetry {:.3e}", free_particle_experiment(a, 0.1005, 0.01)?.0.asymmetry);
    }
    for u in [0.1005, 0.01, 0.001] {
        println!("u = {u:e}: asymmetry {:.3e}", free_particle_experiment(1e-3, u, 0.01)?.0.asymmetry);
    }
    Ok(())
}
