//! Integral line of `Z` through the origin integrated as a free particle,
//! compared with `dx¹/dt = u / (R √(R² + u²))`.

use framekin::catalog::make_friedmann;
use framekin::geodesic::{integrate_geodesic, StepControl};

fn main() -> framekin::Result<()> {
    let (a, u) = (1e-3, 0.1005);
    let model = make_friedmann(a, u)?;
    let p = model.metric.point([0.0; 4])?;
    let z = model.frame_z.eval(&p)?;
    let path = integrate_geodesic(&model.metric, &p, z, 10.0, StepControl::fixed(1e-3))?;

    let mut worst = 0.0_f64;
    for s in &path.samples {
        let r = 1.0 + a * s.point.coords[0];
        let exact = u / (r * (r * r + u * u).sqrt());
        worst = worst.max((s.velocity[1] / s.velocity[0] - exact).abs());
    }
    println!("{} samples, max |dx¹/dt - closed form| = {worst:.3e}", path.samples.len());
    println!("norm defect {:.3e}", path.max_norm_defect(&model.metric)?);
    let csv = path.to_csv();
    for line in csv.lines().take(3) {
        println!("{line}");
    }
    Ok(())
}
