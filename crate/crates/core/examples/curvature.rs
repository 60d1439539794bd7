//! Connection and curvature of the linearly expanding Friedmann model.

use framekin::catalog::make_friedmann;
use framekin::geometry::{christoffel, riemann};

fn main() -> framekin::Result<()> {
    let model = make_friedmann(0.1, 0.0)?;
    for t in [0.0, 1.0, 5.0] {
        let p = model.metric.point([t, 0.3, -0.2, 1.0])?;
        let gamma = christoffel(&model.metric, &p)?.gamma;
        let curv = riemann(&model.metric, &p)?;
        // R = 1 + at, so Γ⁰_11 = R Ṙ and Γ¹_01 = Ṙ/R.
        println!(
            "t = {t:>4}: Γ⁰_11 = {:.6}  Γ¹_01 = {:.6}  Ricci scalar = {:.3e}  G_00 = {:.6}",
            gamma[0][1][1], gamma[1][0][1], curv.scalar, curv.einstein[0][0]
        );
    }
    Ok(())
}
