//! Dense fixed-size component arrays.
//!
//! Every rank-k object lives in a `[..; 4]` nest, index order as written in
//! the component symbol (contravariant indices first).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec4 = [f64; 4];
pub type Mat4 = [[f64; 4]; 4];
pub type Tensor3 = [[[f64; 4]; 4]; 4];
pub type Tensor4 = [[[[f64; 4]; 4]; 4]; 4];

pub const ZERO4: Mat4 = [[0.0; 4]; 4];

/// Minkowski components diag(1,-1,-1,-1).
pub const ETA: Mat4 = [[1.0, 0.0, 0.0, 0.0], [0.0, -1.0, 0.0, 0.0], [0.0, 0.0, -1.0, 0.0], [0.0, 0.0, 0.0, -1.0]];

pub fn identity() -> Mat4 {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { 1.0 } else { 0.0 }))
}

pub fn mat_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..4).map(|k| a[i][k] * b[k][j]).sum()))
}

pub fn mat_vec(a: &Mat4, v: &Vec4) -> Vec4 {
    std::array::from_fn(|i| (0..4).map(|k| a[i][k] * v[k]).sum())
}

pub fn transpose(a: &Mat4) -> Mat4 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i]))
}

/// g(u, v) for a bilinear form given by components.
pub fn inner(g: &Mat4, u: &Vec4, v: &Vec4) -> f64 {
    let mut s = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            s += g[i][j] * u[i] * v[j];
        }
    }
    s
}

pub fn lower(g: &Mat4, v: &Vec4) -> Vec4 {
    mat_vec(g, v)
}

pub fn max_abs<'a>(values: impl IntoIterator<Item = &'a f64>) -> f64 {
    values.into_iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

pub fn max_abs_diff_mat(a: &Mat4, b: &Mat4) -> f64 {
    let mut m = 0.0_f64;
    for i in 0..4 {
        for j in 0..4 {
            m = m.max((a[i][j] - b[i][j]).abs());
        }
    }
    m
}

pub fn invert(m: &Mat4) -> Option<Mat4> {
    let na = nalgebra::Matrix4::from_fn(|i, j| m[i][j]);
    let inv = na.try_inverse()?;
    Some(std::array::from_fn(|i| std::array::from_fn(|j| inv[(i, j)])))
}

pub fn flatten_mat(m: &Mat4) -> Vec<f64> {
    m.iter().flatten().copied().collect()
}

/// Components of a type (r, s) tensor at a point, stored row-major with the
/// `r` contravariant indices first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tensor {
    pub contravariant: usize,
    pub covariant: usize,
    pub data: Vec<f64>,
}

impl Tensor {
    pub fn new(contravariant: usize, covariant: usize, data: Vec<f64>) -> Result<Self> {
        let expected = 4usize.pow((contravariant + covariant) as u32);
        if data.len() != expected {
            return Err(Error::Shape(format!(
                "type ({contravariant},{covariant}) needs {expected} components, got {}",
                data.len()
            )));
        }
        Ok(Tensor { contravariant, covariant, data })
    }

    pub fn zeros(contravariant: usize, covariant: usize) -> Self {
        let n = 4usize.pow((contravariant + covariant) as u32);
        Tensor { contravariant, covariant, data: vec![0.0; n] }
    }

    pub fn scalar(value: f64) -> Self {
        Tensor { contravariant: 0, covariant: 0, data: vec![value] }
    }

    pub fn vector(v: Vec4) -> Self {
        Tensor { contravariant: 1, covariant: 0, data: v.to_vec() }
    }

    pub fn covector(v: Vec4) -> Self {
        Tensor { contravariant: 0, covariant: 1, data: v.to_vec() }
    }

    pub fn bilinear(m: &Mat4) -> Self {
        Tensor { contravariant: 0, covariant: 2, data: flatten_mat(m) }
    }

    pub fn rank(&self) -> usize {
        self.contravariant + self.covariant
    }

    pub fn max_abs_diff(&self, other: &Tensor) -> Result<f64> {
        if self.contravariant != other.contravariant || self.covariant != other.covariant {
            return Err(Error::Shape(format!(
                "cannot compare type ({},{}) with ({},{})",
                self.contravariant, self.covariant, other.contravariant, other.covariant
            )));
        }
        Ok(self.data.iter().zip(&other.data).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_is_checked() {
        assert!(Tensor::new(1, 1, vec![0.0; 16]).is_ok());
        assert!(matches!(Tensor::new(1, 1, vec![0.0; 15]), Err(Error::Shape(_))));
        assert!(Tensor::vector([1.0; 4]).max_abs_diff(&Tensor::covector([1.0; 4])).is_err());
    }

    #[test]
    fn eta_is_self_inverse() {
        assert_eq!(invert(&ETA).unwrap(), ETA);
        assert_eq!(mat_mul(&ETA, &ETA), identity());
    }
}
