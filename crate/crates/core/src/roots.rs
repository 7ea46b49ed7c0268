//! Bracketed scalar root finding.
//!
//! [`safeguarded_newton`] keeps a sign-changing bracket and takes a Newton
//! step whenever it lands strictly inside the bracket and shrinks the
//! residual fast enough; otherwise it bisects.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const MAX_ITER: usize = 400;

/// Root of `f` in `[lo, hi]` where `f` returns `(value, derivative)`.
///
/// Terminates when the bracket is narrower than `rtol * max(|x|, tiny)`.
/// Infinite endpoint values are allowed, which is what happens at the
/// singular end of the laminar-flow formulas.
pub fn safeguarded_newton<T, F>(mut f: F, lo: T, hi: T, rtol: T) -> Result<T>
where
    T: Scalar,
    F: FnMut(T) -> (T, T),
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let fa = f(a).0;
    let fb = f(b).0;
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if fa.is_nan() || fb.is_nan() || fa.signum() == fb.signum() {
        return Err(Error::RootFinding(format!(
            "no sign change on [{}, {}] (f = {}, {})",
            a, b, fa, fb
        )));
    }
    // orient so that f(a) < 0 < f(b)
    let flip = fa > T::zero();
    let half = T::lit(0.5);
    let mut x = half * (a + b);
    let mut dx_old = b - a;
    let mut dx = dx_old;
    let (mut fx, mut dfx) = f(x);
    for _ in 0..MAX_ITER {
        let fx_o = if flip { -fx } else { fx };
        if fx_o == T::zero() {
            return Ok(x);
        }
        if fx_o < T::zero() {
            a = x;
        } else {
            b = x;
        }
        let width = b - a;
        let scale = x.abs().max(T::min_positive_value());
        if width <= rtol * scale {
            return Ok(half * (a + b));
        }
        let newton_ok = dfx.is_finite() && dfx != T::zero() && fx.is_finite() && {
            let xn = x - fx / dfx;
            xn > a && xn < b && (T::lit(2.0) * fx).abs() <= (dx_old * dfx).abs()
        };
        dx_old = dx;
        if newton_ok {
            dx = fx / dfx;
            let xn = x - dx;
            if xn == x {
                return Ok(x);
            }
            x = xn;
        } else {
            dx = half * width;
            x = a + dx;
        }
        if newton_ok && dx.abs() <= rtol * scale * half {
            return Ok(x);
        }
        let r = f(x);
        fx = r.0;
        dfx = r.1;
    }
    Err(Error::RootFinding(format!(
        "no convergence on [{}, {}] after {} iterations",
        a, b, MAX_ITER
    )))
}

/// Plain bisection for functions without a convenient derivative.
pub fn bisect<T, F>(mut f: F, lo: T, hi: T, atol: T) -> Result<T>
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let fa = f(a);
    let fb = f(b);
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if fa.is_nan() || fb.is_nan() || fa.signum() == fb.signum() {
        return Err(Error::RootFinding(format!(
            "no sign change on [{}, {}] (f = {}, {})",
            a, b, fa, fb
        )));
    }
    let neg_at_a = fa < T::zero();
    let half = T::lit(0.5);
    for _ in 0..MAX_ITER {
        let m = half * (a + b);
        if b - a <= atol || m <= a || m >= b {
            return Ok(m);
        }
        let fm = f(m);
        if fm == T::zero() {
            return Ok(m);
        }
        if (fm < T::zero()) == neg_at_a {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(half * (a + b))
}
