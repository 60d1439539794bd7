//! Pushing tensors forward and testing maps for symmetry.

use framekin::catalog::{make_friedmann, minkowski};
use framekin::equivalence::{is_symmetry, pushforward_tensor, symmetry_defect};
use framekin::geometry::{AffineMap, ChartPoint};
use framekin::tensor::Tensor;

fn main() -> framekin::Result<()> {
    let f = make_friedmann(0.1, 0.0)?;
    let chart = f.chart().clone();
    let samples: Vec<ChartPoint> = [[0.0, 0.0, 0.0, 0.0], [1.0, 2.0, -1.0, 0.5]]
        .into_iter()
        .map(|x| f.metric.point(x))
        .collect::<Result<_, _>>()?;

    let shift = AffineMap::translation(chart.clone(), [0.0, 3.0, 0.0, -1.0]);
    let boost = AffineMap::boost_x(chart.clone(), 0.3)?;
    println!("translation preserves g: {}", is_symmetry(&shift, &f.metric, &samples)?);
    println!(
        "boost preserves g: {} (defect {:.3e})",
        is_symmetry(&boost, &f.metric, &samples)?,
        symmetry_defect(&boost, &f.metric, &samples)?
    );

    let m = minkowski();
    let lorentz = AffineMap::boost_x(m.chart().clone(), 0.6)?;
    let flat: Vec<_> = samples.iter().map(|p| m.point(p.coords)).collect::<Result<_, _>>()?;
    println!("boost preserves η: {}", is_symmetry(&lorentz, &m, &flat)?);

    let dilation = AffineMap::dilation(m.chart().clone(), 2.0)?;
    let (q, v) = pushforward_tensor(&dilation, &Tensor::vector([1.0, 0.5, 0.0, 0.0]), &flat[1])?;
    println!("dilated vector at {:?}: {:?}", q.coords, v.data);
    Ok(())
}
