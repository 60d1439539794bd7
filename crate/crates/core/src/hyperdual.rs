//! Second-order truncated Taylor arithmetic in four variables.
//!
//! A [`HyperDual`] carries a value together with its gradient and Hessian with
//! respect to the four chart coordinates. Arithmetic propagates all three
//! exactly (up to floating point rounding), so evaluating a metric on seeded
//! coordinates yields `g`, `∂g` and `∂∂g` at machine precision without any
//! step-size tuning.
//!
//! ```
//! use framekin::HyperDual;
//!
//! let [x, y, _, _] = HyperDual::seed([2.0, 3.0, 0.0, 0.0]);
//! let f = x * x * y;
//! assert_eq!(f.re, 12.0);
//! assert_eq!(f.grad[0], 12.0); // 2xy
//! assert_eq!(f.hess[0][1], 4.0); // 2x
//! ```

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

#[derive(Clone, Copy, PartialEq, Default)]
pub struct HyperDual {
    pub re: f64,
    pub grad: [f64; 4],
    pub hess: [[f64; 4]; 4],
}

impl fmt::Debug for HyperDual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HyperDual({} ; {:?} ; {:?})", self.re, self.grad, self.hess)
    }
}

impl HyperDual {
    pub const ZERO: HyperDual = HyperDual { re: 0.0, grad: [0.0; 4], hess: [[0.0; 4]; 4] };
    pub const ONE: HyperDual = HyperDual { re: 1.0, grad: [0.0; 4], hess: [[0.0; 4]; 4] };

    #[inline]
    pub const fn constant(re: f64) -> Self {
        HyperDual { re, grad: [0.0; 4], hess: [[0.0; 4]; 4] }
    }

    /// Independent variable number `index` evaluated at `re`.
    #[inline]
    pub fn variable(re: f64, index: usize) -> Self {
        let mut v = Self::constant(re);
        v.grad[index] = 1.0;
        v
    }

    /// Seed all four coordinates of a point as independent variables.
    pub fn seed(point: [f64; 4]) -> [HyperDual; 4] {
        std::array::from_fn(|i| Self::variable(point[i], i))
    }

    pub fn constants(point: [f64; 4]) -> [HyperDual; 4] {
        point.map(Self::constant)
    }

    pub fn values(x: &[HyperDual; 4]) -> [f64; 4] {
        std::array::from_fn(|i| x[i].re)
    }

    /// Chain rule: compose a scalar function with known value and first two
    /// derivatives at `self.re`.
    #[inline]
    pub fn chain(&self, f0: f64, f1: f64, f2: f64) -> Self {
        let mut out = HyperDual::constant(f0);
        for i in 0..4 {
            out.grad[i] = f1 * self.grad[i];
        }
        for i in 0..4 {
            for j in 0..4 {
                out.hess[i][j] = f1 * self.hess[i][j] + f2 * self.grad[i] * self.grad[j];
            }
        }
        out
    }

    pub fn recip(&self) -> Self {
        let r = 1.0 / self.re;
        self.chain(r, -r * r, 2.0 * r * r * r)
    }

    pub fn sqrt(&self) -> Self {
        let s = self.re.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * self.re))
    }

    pub fn powi(&self, n: i32) -> Self {
        match n {
            0 => Self::ONE,
            1 => *self,
            _ => {
                let nf = n as f64;
                let p2 = self.re.powi(n - 2);
                self.chain(p2 * self.re * self.re, nf * p2 * self.re, nf * (nf - 1.0) * p2)
            }
        }
    }

    pub fn ln(&self) -> Self {
        let r = 1.0 / self.re;
        self.chain(self.re.ln(), r, -r * r)
    }

    pub fn exp(&self) -> Self {
        let e = self.re.exp();
        self.chain(e, e, e)
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite()
            && self.grad.iter().all(|g| g.is_finite())
            && self.hess.iter().flatten().all(|h| h.is_finite())
    }

    /// Drop the second-order part.
    pub fn first_order(&self) -> Self {
        HyperDual { re: self.re, grad: self.grad, hess: [[0.0; 4]; 4] }
    }
}

impl From<f64> for HyperDual {
    fn from(re: f64) -> Self {
        HyperDual::constant(re)
    }
}

impl Add for HyperDual {
    type Output = HyperDual;
    #[inline]
    fn add(mut self, rhs: HyperDual) -> HyperDual {
        self += rhs;
        self
    }
}

impl AddAssign for HyperDual {
    #[inline]
    fn add_assign(&mut self, rhs: HyperDual) {
        self.re += rhs.re;
        for i in 0..4 {
            self.grad[i] += rhs.grad[i];
            for j in 0..4 {
                self.hess[i][j] += rhs.hess[i][j];
            }
        }
    }
}

impl Sub for HyperDual {
    type Output = HyperDual;
    #[inline]
    fn sub(mut self, rhs: HyperDual) -> HyperDual {
        self -= rhs;
        self
    }
}

impl SubAssign for HyperDual {
    #[inline]
    fn sub_assign(&mut self, rhs: HyperDual) {
        self.re -= rhs.re;
        for i in 0..4 {
            self.grad[i] -= rhs.grad[i];
            for j in 0..4 {
                self.hess[i][j] -= rhs.hess[i][j];
            }
        }
    }
}

impl Neg for HyperDual {
    type Output = HyperDual;
    #[inline]
    fn neg(self) -> HyperDual {
        self * -1.0
    }
}

impl Mul for HyperDual {
    type Output = HyperDual;
    #[inline]
    fn mul(self, rhs: HyperDual) -> HyperDual {
        let mut out = HyperDual::constant(self.re * rhs.re);
        for i in 0..4 {
            out.grad[i] = self.re * rhs.grad[i] + self.grad[i] * rhs.re;
        }
        for i in 0..4 {
            for j in 0..4 {
                out.hess[i][j] = self.re * rhs.hess[i][j]
                    + self.hess[i][j] * rhs.re
                    + self.grad[i] * rhs.grad[j]
                    + self.grad[j] * rhs.grad[i];
            }
        }
        out
    }
}

impl MulAssign for HyperDual {
    #[inline]
    fn mul_assign(&mut self, rhs: HyperDual) {
        *self = *self * rhs;
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for HyperDual {
    type Output = HyperDual;
    #[inline]
    fn div(self, rhs: HyperDual) -> HyperDual {
        self * rhs.recip()
    }
}

impl Add<f64> for HyperDual {
    type Output = HyperDual;
    #[inline]
    fn add(mut self, rhs: f64) -> HyperDual {
        self.re += rhs;
        self
    }
}

impl Sub<f64> for HyperDual {
    type Output = HyperDual;
    #[inline]
    fn sub(mut self, rhs: f64) -> HyperDual {
        self.re -= rhs;
        self
    }
}

impl Mul<f64> for HyperDual {
    type Output = HyperDual;
    #[inline]
    fn mul(mut self, rhs: f64) -> HyperDual {
        self.re *= rhs;
        for i in 0..4 {
            self.grad[i] *= rhs;
            for j in 0..4 {
                self.hess[i][j] *= rhs;
            }
        }
        self
    }
}

impl Div<f64> for HyperDual {
    type Output = HyperDual;
    #[inline]
    fn div(self, rhs: f64) -> HyperDual {
        self * (1.0 / rhs)
    }
}

impl Add<HyperDual> for f64 {
    type Output = HyperDual;
    #[inline]
    fn add(self, rhs: HyperDual) -> HyperDual {
        rhs + self
    }
}

impl Sub<HyperDual> for f64 {
    type Output = HyperDual;
    #[inline]
    fn sub(self, rhs: HyperDual) -> HyperDual {
        -rhs + self
    }
}

impl Mul<HyperDual> for f64 {
    type Output = HyperDual;
    #[inline]
    fn mul(self, rhs: HyperDual) -> HyperDual {
        rhs * self
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Div<HyperDual> for f64 {
    type Output = HyperDual;
    #[inline]
    fn div(self, rhs: HyperDual) -> HyperDual {
        rhs.recip() * self
    }
}

impl std::iter::Sum for HyperDual {
    fn sum<I: Iterator<Item = HyperDual>>(iter: I) -> HyperDual {
        iter.fold(HyperDual::ZERO, |acc, x| acc + x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn product_rule_matches_hand_derivatives() {
        let [x, y, z, _] = HyperDual::seed([1.5, -0.5, 2.0, 0.0]);
        let f = x * y * z + x * x;
        assert!(close(f.grad[0], -0.5 * 2.0 + 3.0, 1e-15));
        assert!(close(f.grad[1], 1.5 * 2.0, 1e-15));
        assert!(close(f.hess[0][0], 2.0, 1e-15));
        assert!(close(f.hess[0][2], -0.5, 1e-15));
        assert!(close(f.hess[1][2], 1.5, 1e-15));
        assert_eq!(f.hess[3], [0.0; 4]);
    }

    #[test]
    fn elementary_functions() {
        let [x, _, _, _] = HyperDual::seed([0.7, 0.0, 0.0, 0.0]);
        let s = x.sqrt();
        assert!(close(s.grad[0], 0.5 / 0.7f64.sqrt(), 1e-15));
        assert!(close(s.hess[0][0], -0.25 * 0.7f64.powf(-1.5), 1e-14));
        let l = x.ln();
        assert!(close(l.hess[0][0], -1.0 / 0.49, 1e-14));
        let e = x.exp();
        assert!(close(e.hess[0][0], 0.7f64.exp(), 1e-15));
        let p = x.powi(3);
        assert!(close(p.re, 0.343, 1e-15));
        assert!(close(p.hess[0][0], 6.0 * 0.7, 1e-14));
        let q = (x * x).recip();
        assert!(close(q.grad[0], -2.0 / 0.343, 1e-14));
        assert!(close(q.hess[0][0], 6.0 / 0.7f64.powi(4), 1e-13));
    }

    #[test]
    fn division_is_consistent_with_recip() {
        let [x, y, _, _] = HyperDual::seed([1.2, 0.3, 0.0, 0.0]);
        let a = x / (y + 1.0);
        let b = x * (y + 1.0).recip();
        assert_eq!(a, b);
        // d²/dx dy of x/(1+y) = -1/(1+y)^2
        assert!(close(a.hess[0][1], -1.0 / 1.69, 1e-14));
    }
}
