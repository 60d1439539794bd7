use serde::Serialize;

use crate::error::{Error, Result};
use crate::geodesic::integrator::rk4_step;
use crate::geodesic::GeodesicPath;
use crate::geometry::{christoffel, MetricField};
use crate::tensor::{inner, Mat4, Vec4, ETA};

/// Tolerance on `g(e_μ, e_ν) = η_{μν}` for tetrads.
pub const ORTHONORMAL_TOLERANCE: f64 = 1e-8;

/// Orthonormal tetrads parallel-transported along a geodesic, one per sample.
#[derive(Debug, Clone, Serialize)]
pub struct TransportedTetrad {
    pub path: GeodesicPath,
    /// `tetrads[k][a]` is `e_a` at sample `k`.
    pub tetrads: Vec<[Vec4; 4]>,
    /// Largest `|g(e_a,e_b) - η_ab|` over all samples.
    pub max_orthonormality_defect: f64,
}

/// Largest `|g(e_a,e_b) - η_ab|`.
pub fn orthonormality_defect(g: &Mat4, tetrad: &[Vec4; 4]) -> f64 {
    let mut worst = 0.0_f64;
    for a in 0..4 {
        for b in 0..4 {
            worst = worst.max((inner(g, &tetrad[a], &tetrad[b]) - ETA[a][b]).abs());
        }
    }
    worst
}

/// Comoving-style tetrad for a diagonal metric: `e_a = ∂_a / √|g_aa|`.
pub fn diagonal_tetrad(g: &Mat4) -> Result<[Vec4; 4]> {
    let mut e = [[0.0; 4]; 4];
    for a in 0..4 {
        let n = g[a][a].abs().sqrt();
        if n == 0.0 {
            return Err(Error::Shape("diagonal tetrad needs non-zero diagonal".into()));
        }
        e[a][a] = 1.0 / n;
    }
    Ok(e)
}

/// Orthonormal tetrad with `e₀ = u`, completed by Gram–Schmidt on the
/// coordinate directions.
pub fn tetrad_from_velocity(g: &Mat4, u: &Vec4) -> Result<[Vec4; 4]> {
    let n = inner(g, u, u);
    if !(n > 0.0) {
        return Err(Error::NotTimelike { point: [f64::NAN; 4], norm: n });
    }
    let mut e = [[0.0; 4]; 4];
    e[0] = u.map(|c| c / n.sqrt());
    let mut next = 1;
    for axis in 1..4 {
        let mut w = [0.0; 4];
        w[axis] = 1.0;
        for b in 0..next {
            let proj = inner(g, &w, &e[b]) * ETA[b][b];
            for i in 0..4 {
                w[i] -= proj * e[b][i];
            }
        }
        let nw = -inner(g, &w, &w);
        if !(nw > 1e-24) {
            continue;
        }
        e[next] = w.map(|c| c / nw.sqrt());
        next += 1;
    }
    if next != 4 {
        return Err(Error::NotOrthonormal(f64::NAN));
    }
    Ok(e)
}

/// Solve `De_a/ds = 0` along `path` jointly with the geodesic, on the path's
/// own step sequence.
pub fn parallel_transport_tetrad(
    metric: &MetricField,
    path: &GeodesicPath,
    initial: [Vec4; 4],
) -> Result<TransportedTetrad> {
    let start = path.samples.first().ok_or(Error::EmptySamples)?;
    let g0 = metric.eval(&start.point)?;
    let defect = orthonormality_defect(&g0, &initial);
    if defect > ORTHONORMAL_TOLERANCE {
        return Err(Error::NotOrthonormal(defect));
    }
    let e0_defect = (0..4).map(|i| (initial[0][i] - start.velocity[i]).abs()).fold(0.0, f64::max);
    if e0_defect > ORTHONORMAL_TOLERANCE {
        return Err(Error::NotOrthonormal(e0_defect));
    }
    let rhs = |y: &[f64; 24]| -> Result<[f64; 24]> {
        let p = metric.point([y[0], y[1], y[2], y[3]])?;
        let gamma = christoffel(metric, &p)?;
        let u = [y[4], y[5], y[6], y[7]];
        let mut d = [0.0; 24];
        d[..4].copy_from_slice(&u);
        let acc = gamma.contract(&u, &u);
        for i in 0..4 {
            d[4 + i] = -acc[i];
        }
        for a in 1..4 {
            let e = [y[4 + 4 * a], y[5 + 4 * a], y[6 + 4 * a], y[7 + 4 * a]];
            let de = gamma.contract(&u, &e);
            for i in 0..4 {
                d[4 + 4 * a + i] = -de[i];
            }
        }
        Ok(d)
    };
    let mut y = [0.0; 24];
    y[..4].copy_from_slice(&start.point.coords);
    for a in 0..4 {
        y[4 + 4 * a..8 + 4 * a].copy_from_slice(&initial[a]);
    }
    let mut tetrads = vec![initial];
    let mut worst = defect;
    for w in path.samples.windows(2) {
        y = rk4_step(&rhs, &y, w[1].s - w[0].s)?;
        // The geodesic itself is taken from the path.
        y[..4].copy_from_slice(&w[1].point.coords);
        y[4..8].copy_from_slice(&w[1].velocity);
        let e: [Vec4; 4] = std::array::from_fn(|a| std::array::from_fn(|i| y[4 + 4 * a + i]));
        worst = worst.max(orthonormality_defect(&metric.eval(&w[1].point)?, &e));
        tetrads.push(e);
    }
    Ok(TransportedTetrad { path: path.clone(), tetrads, max_orthonormality_defect: worst })
}
