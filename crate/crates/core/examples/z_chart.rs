//! Coordinates adapted to `Z`: round trip, `Z = ∂/∂t′`, and the metric in the
//! new chart against its closed form.

use std::sync::Arc;

use framekin::catalog::{make_friedmann, z_chart, z_chart_metric};
use framekin::equivalence::push_frame;
use framekin::geometry::{push_metric, ChartMap};
use framekin::tensor::max_abs_diff_mat;

fn main() -> framekin::Result<()> {
    let model = make_friedmann(0.05, 0.3)?;
    let chart: Arc<dyn ChartMap> = Arc::new(z_chart(&model));
    let pushed = push_metric(&model.metric, chart.clone())?;
    let closed = z_chart_metric(&model);
    let z = push_frame(&model.frame_z, &pushed, chart.clone())?;

    for x in [[0.0, 0.0, 0.0, 0.0], [2.0, -1.0, 0.5, 3.0], [7.5, 4.0, -2.0, 0.0]] {
        let p = model.metric.point(x)?;
        let q = chart.forward(&p)?;
        let back = chart.inverse(&q)?;
        let g_diff = max_abs_diff_mat(&pushed.eval(&q)?, &closed.eval(&closed.point(q.coords)?)?);
        println!(
            "{x:?} -> {:.6?}  roundtrip {:.1e}  Z′ = {:.3?}  |g - closed form| = {g_diff:.1e}",
            q.coords,
            (0..4).map(|i| (back.coords[i] - x[i]).abs()).fold(0.0, f64::max),
            z.eval(&q)?,
        );
    }
    Ok(())
}
