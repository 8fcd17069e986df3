//! Bracketed scalar root finding.

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real};

/// Outcome of a bracketed root search, kept for solver diagnostics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootReport<T> {
    pub root: T,
    /// Final bracket `[lo, hi]` containing the sign change.
    pub bracket: (T, T),
    pub iterations: usize,
    /// `f(root)`.
    pub residual: T,
}

/// Brent's method on a bracket with a sign change.
///
/// Stops once the bracket is narrower than `tol` (or an exact zero is hit).
/// Every step keeps a valid bracket, so the result is never worse than
/// bisection.
pub fn brent<T: Real, F: FnMut(T) -> Result<T>>(
    mut f: F,
    lo: T,
    hi: T,
    tol: T,
    max_iter: usize,
) -> Result<RootReport<T>> {
    let (mut a, mut b) = (lo, hi);
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == T::zero() {
        return Ok(RootReport {
            root: a,
            bracket: (a, a),
            iterations: 0,
            residual: fa,
        });
    }
    if fb == T::zero() {
        return Ok(RootReport {
            root: b,
            bracket: (b, b),
            iterations: 0,
            residual: fb,
        });
    }
    if (fa > T::zero()) == (fb > T::zero()) {
        return Err(Error::RootBracket {
            lo: to_f64(lo),
            hi: to_f64(hi),
            f_lo: to_f64(fa),
            f_hi: to_f64(fb),
        });
    }
    let two: T = lit(2.0);
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for iter in 1..=max_iter {
        if (fb > T::zero()) == (fc > T::zero()) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = two * T::eps() * b.abs() + tol * lit(0.5);
        let m = (c - b) * lit(0.5);
        if m.abs() <= tol1 || fb == T::zero() {
            let (l, h) = if b < c { (b, c) } else { (c, b) };
            return Ok(RootReport {
                root: b,
                bracket: (l, h),
                iterations: iter,
                residual: fb,
            });
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * m * s;
                q = T::one() - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (two * m * qa * (qa - r) - (b - a) * (r - T::one()));
                q = (qa - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > T::zero() {
                q = -q;
            } else {
                p = -p;
            }
            if two * p < (lit::<T>(3.0) * m * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 {
            d
        } else if m > T::zero() {
            tol1
        } else {
            -tol1
        };
        fb = f(b)?;
    }
    Err(Error::NoConvergence(format!("brent: {max_iter} iterations")))
}

/// Plain bisection, used where only sign information is trustworthy.
pub fn bisect<T: Real, F: FnMut(T) -> Result<T>>(
    mut f: F,
    lo: T,
    hi: T,
    tol: T,
    max_iter: usize,
) -> Result<RootReport<T>> {
    let (mut a, mut b) = (lo, hi);
    let fa = f(a)?;
    let fb = f(b)?;
    if (fa > T::zero()) == (fb > T::zero()) && fa != T::zero() && fb != T::zero() {
        return Err(Error::RootBracket {
            lo: to_f64(lo),
            hi: to_f64(hi),
            f_lo: to_f64(fa),
            f_hi: to_f64(fb),
        });
    }
    let a_positive = fa > T::zero();
    let mut fm = fa;
    for iter in 1..=max_iter {
        let m = (a + b) * lit(0.5);
        if (b - a).abs() <= tol || m == a || m == b {
            return Ok(RootReport {
                root: m,
                bracket: (a, b),
                iterations: iter,
                residual: fm,
            });
        }
        fm = f(m)?;
        if fm == T::zero() {
            return Ok(RootReport {
                root: m,
                bracket: (m, m),
                iterations: iter,
                residual: fm,
            });
        }
        if (fm > T::zero()) == a_positive {
            a = m;
        } else {
            b = m;
        }
    }
    Err(Error::NoConvergence(format!("bisection: {max_iter} iterations")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brent_finds_cubic_root() {
        let r = brent(|x: f64| Ok(x * x * x - 2.0), 0.0, 2.0, 1e-14, 100).unwrap();
        assert!((r.root - 2f64.cbrt()).abs() < 1e-13);
        assert!(r.iterations < 20);
    }

    #[test]
    fn bisection_matches_brent() {
        let f = |x: f64| Ok(x.cos() - x);
        let a = bisect(f, 0.0, 1.0, 1e-13, 200).unwrap();
        let b = brent(f, 0.0, 1.0, 1e-13, 200).unwrap();
        assert!((a.root - b.root).abs() < 1e-12);
    }

    #[test]
    fn missing_sign_change_is_reported() {
        let err = brent(|x: f64| Ok(x * x + 1.0), -1.0, 1.0, 1e-12, 50).unwrap_err();
        assert!(matches!(err, Error::RootBracket { .. }));
    }
}
