//! Bracketed bisection and central differences.

use crate::error::{Error, Result};

/// Stopping rule for [`bisect`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bisection {
    /// Stop once `|f(x)| <= f_tol`.
    pub f_tol: f64,
    /// Stop once the bracket is narrower than `x_tol`.
    pub x_tol: f64,
    pub max_iter: usize,
}

impl Default for Bisection {
    fn default() -> Self {
        Bisection {
            f_tol: 1e-10,
            x_tol: 1e-12,
            max_iter: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Finds a sign change of `f` inside `[low, high]` by bisection.
///
/// The bracket must show opposite signs (or a zero) at its ends. Once the
/// midpoint can no longer be separated from an endpoint in `f64` the search
/// stops as converged.
pub fn bisect<F>(mut f: F, low: f64, high: f64, rule: &Bisection) -> Result<Root>
where
    F: FnMut(f64) -> f64,
{
    if !(low.is_finite() && high.is_finite() && low < high) {
        return Err(Error::Precondition("bracket must satisfy low < high"));
    }
    let (mut lo, mut hi) = (low, high);
    let mut f_lo = eval(&mut f, lo)?;
    let f_hi = eval(&mut f, hi)?;
    if f_lo == 0.0 {
        return Ok(Root { x: lo, residual: 0.0, iterations: 0 });
    }
    if f_hi == 0.0 {
        return Ok(Root { x: hi, residual: 0.0, iterations: 0 });
    }
    if (f_lo > 0.0) == (f_hi > 0.0) {
        return Err(Error::NoBracket {
            low,
            high,
            f_low: f_lo,
            f_high: f_hi,
        });
    }

    for iter in 1..=rule.max_iter {
        let mid = lo + 0.5 * (hi - lo);
        let f_mid = eval(&mut f, mid)?;
        let stalled = mid <= lo || mid >= hi;
        if f_mid.abs() <= rule.f_tol || hi - lo <= rule.x_tol || stalled {
            return Ok(Root {
                x: mid,
                residual: f_mid,
                iterations: iter,
            });
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NonConvergence {
        iterations: rule.max_iter,
        width: hi - lo,
    })
}

fn eval<F: FnMut(f64) -> f64>(f: &mut F, x: f64) -> Result<f64> {
    let y = f(x);
    if y.is_nan() {
        Err(Error::EvaluationFailure { at: x })
    } else {
        Ok(y)
    }
}

/// Step used by [`central_difference`]: `max(1e-6, 1e-6·|x|)`.
pub fn difference_step(x: f64) -> f64 {
    (1e-6 * x.abs()).max(1e-6)
}

pub fn central_difference<F: Fn(f64) -> f64>(f: F, x: f64) -> f64 {
    let h = difference_step(x);
    (f(x + h) - f(x - h)) / (2.0 * h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, &Bisection::default()).unwrap();
        assert!((r.x - core::f64::consts::SQRT_2).abs() < 1e-10);
    }

    #[test]
    fn endpoint_root() {
        let r = bisect(|x| x - 1.0, 1.0, 3.0, &Bisection::default()).unwrap();
        assert_eq!(r.x, 1.0);
    }

    #[test]
    fn no_sign_change() {
        let e = bisect(|x| x * x + 1.0, -1.0, 1.0, &Bisection::default()).unwrap_err();
        assert!(matches!(e, Error::NoBracket { .. }));
    }

    #[test]
    fn iteration_cap() {
        let rule = Bisection {
            f_tol: 0.0,
            x_tol: 0.0,
            max_iter: 5,
        };
        let e = bisect(|x| x - 0.3, 0.0, 1.0, &rule).unwrap_err();
        assert!(matches!(e, Error::NonConvergence { iterations: 5, .. }));
    }

    #[test]
    fn nan_is_evaluation_failure() {
        let e = bisect(|_| f64::NAN, 0.0, 1.0, &Bisection::default()).unwrap_err();
        assert!(matches!(e, Error::EvaluationFailure { .. }));
    }

    #[test]
    fn central_difference_on_quadratic() {
        let d = central_difference(|x| 3.0 * x * x, 2.0);
        assert!((d - 12.0).abs() < 1e-6);
        assert_eq!(difference_step(0.5), 1e-6);
        assert_eq!(difference_step(1e3), 1e-3);
    }
}
