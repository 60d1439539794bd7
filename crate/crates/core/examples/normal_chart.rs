//! Riemann normal coordinates at a point of the Friedmann model.

use std::sync::Arc;

use framekin::catalog::make_friedmann;
use framekin::geodesic::diagonal_tetrad;
use framekin::geometry::ChartMap;
use framekin::normal::build_normal_chart;

fn main() -> framekin::Result<()> {
    let model = make_friedmann(1e-2, 0.0)?;
    let p0 = model.metric.point([1.0, 0.0, 0.0, 0.0])?;
    let tetrad = diagonal_tetrad(&model.metric.eval(&p0)?)?;
    let chart = Arc::new(build_normal_chart(&model.metric, &p0, tetrad)?);

    let check = chart.check(&model.metric)?;
    println!("metric defect {:.2e}", check.metric_defect);
    println!("max |Γ| at origin {:.2e}", check.gamma_max);
    println!("curvature relation defect {:.2e}", check.curvature_relation_defect);

    let g = chart.metric_in_chart(&model.metric)?;
    for r in [0.03, 0.02, 0.01] {
        let q = g.point([r, r, 0.0, 0.0])?;
        let dev = framekin::tensor::max_abs_diff_mat(&g.eval(&q)?, &framekin::tensor::ETA);
        println!("|ξ| ~ {r}: max |g - η| = {dev:.3e}");
    }
    let xi = chart.forward(&p0.offset([0.01, 0.02, 0.0, -0.01]))?;
    println!("ξ of a nearby point {:.6?}", xi.coords);
    println!("{}", chart.to_json());
    Ok(())
}
