//! Adaptive Simpson quadrature and safeguarded Newton root finding.

use crate::error::{Error, Result};

const MAX_DEPTH: u32 = 48;

/// `∫_a^b f` to absolute tolerance `tol` by adaptive Simpson with Richardson
/// correction. Reversed limits give the negated integral.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a)?;
    let fb = f(b)?;
    let m = 0.5 * (a + b);
    let fm = f(m)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let v = simpson_rec(&f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)?;
    if !v.is_finite() {
        return Err(Error::NonFinite("quadrature".into()));
    }
    Ok(v)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm)?;
    let frm = f(rm)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 {
        return Err(Error::NoConvergence { what: "adaptive Simpson", iterations: MAX_DEPTH as usize });
    }
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    Ok(simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
        + simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
}

/// Root of an increasing function, Newton steps kept inside a bisection
/// bracket. `f` returns `(value, derivative)`.
pub fn monotone_root<F>(f: F, guess: f64, lower_limit: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<(f64, f64)>,
{
    const MAX_ITER: usize = 200;
    // Grow a bracket around the guess.
    let (f0, _) = f(guess)?;
    if f0 == 0.0 {
        return Ok(guess);
    }
    let mut step = guess.abs().max(1.0) * 0.1;
    let (mut lo, mut hi);
    if f0 < 0.0 {
        lo = guess;
        hi = guess + step;
        let mut grown = 0;
        while f(hi)?.0 < 0.0 {
            lo = hi;
            step *= 2.0;
            hi += step;
            grown += 1;
            if grown > MAX_ITER {
                return Err(Error::NoConvergence { what: "root bracketing", iterations: grown });
            }
        }
    } else {
        hi = guess;
        lo = guess - step;
        let mut grown = 0;
        loop {
            if lo <= lower_limit {
                lo = lower_limit + (hi - lower_limit) * 1e-12;
            }
            if f(lo)?.0 < 0.0 {
                break;
            }
            hi = lo;
            step *= 2.0;
            lo -= step;
            grown += 1;
            if grown > MAX_ITER || hi <= lower_limit {
                return Err(Error::NoConvergence { what: "root bracketing", iterations: grown });
            }
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..MAX_ITER {
        let (fx, dfx) = f(x)?;
        if fx == 0.0 {
            return Ok(x);
        }
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - fx / dfx;
        let next = if dfx > 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if (next - x).abs() <= tol * (1.0 + x.abs()) {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::NoConvergence { what: "monotone Newton", iterations: MAX_ITER })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_integrates_polynomials_and_logs() {
        let v = adaptive_simpson(|x| Ok(x * x * x), 0.0, 2.0, 1e-12).unwrap();
        assert!((v - 4.0).abs() < 1e-13);
        let v = adaptive_simpson(|x| Ok(1.0 / x), 1.0, 3.0, 1e-12).unwrap();
        assert!((v - 3f64.ln()).abs() < 1e-12);
        let r = adaptive_simpson(|x| Ok(1.0 / x), 3.0, 1.0, 1e-12).unwrap();
        assert!((r + 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn simpson_propagates_errors() {
        let r = adaptive_simpson(|x| if x > 0.5 { Err(Error::Domain("x".into())) } else { Ok(x) }, 0.0, 1.0, 1e-12);
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn root_of_increasing_functions() {
        let r =
            monotone_root(|x| Ok((x.powi(3) + x - 10.0, 3.0 * x * x + 1.0)), 0.0, f64::NEG_INFINITY, 1e-14).unwrap();
        assert!((r.powi(3) + r - 10.0).abs() < 1e-12);
        let r = monotone_root(|x| Ok((x.ln() + 5.0, 1.0 / x)), 3.0, 0.0, 1e-14).unwrap();
        assert!((r - (-5f64).exp()).abs() < 1e-14);
    }
}
