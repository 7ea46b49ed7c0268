//! Laminar (x-independent) stream solutions and the critical constants of
//! the laminar family.
//!
//! For vorticity `omega`, mass flux `m` and gravity `g` the stream solution
//! with bottom speed `s` is `psi = -omega y^2 / 2 + s y`. It exists for
//! `s >= s0 = sqrt(2 m omega)`; its depth `d(s)` decreases from
//! `d0 = sqrt(2 m / omega)` and its Bernoulli constant `Q(s)` first falls to
//! the minimum `Qc` at `s = sc`, then grows without bound. Every `q` strictly
//! between `Qc` and `Q0 = Q(s0)` is therefore attained twice, giving the two
//! conjugate depths `d_-(q) < d_+(q)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots::safeguarded_newton;
use crate::scalar::Scalar;

/// Dimensional problem constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluidParams<T> {
    /// Gravitational acceleration.
    pub g: T,
    /// Constant (positive) vorticity.
    pub omega: T,
    /// Mass flux.
    pub m: T,
}

impl<T: Scalar> FluidParams<T> {
    pub fn new(g: T, omega: T, m: T) -> Result<Self> {
        let p = Self { g, omega, m };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("g", self.g), ("omega", self.omega), ("m", self.m)] {
            if !(v.is_finite() && v > T::zero()) {
                return Err(Error::InvalidParams(format!(
                    "{name} must be finite and strictly positive, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// `s0 = sqrt(2 m omega)`, the smallest admissible stream parameter.
    pub fn s0(&self) -> T {
        (T::lit(2.0) * self.m * self.omega).sqrt()
    }

    /// `d0 = sqrt(2 m / omega)`, the depth of the stream at `s0`.
    pub fn d0(&self) -> T {
        (T::lit(2.0) * self.m / self.omega).sqrt()
    }

    /// `Q0 = g d0`.
    pub fn q0(&self) -> T {
        self.g * self.d0()
    }

    /// Surface speed `sqrt(s^2 - 2 omega m)` of the stream with parameter `s`.
    ///
    /// The radicand, formed as `(s - s0)(s + s0)`, is clamped to zero
    /// within `1e-14 s^2` of the boundary.
    pub fn surface_speed(&self, s: T) -> Result<T> {
        let s0 = self.s0();
        let rad = (s - s0) * (s + s0);
        if rad.abs() < T::tol(1e-14) * s * s {
            return Ok(T::zero());
        }
        if rad > T::zero() {
            return Ok(rad.sqrt());
        }
        Err(Error::BelowCritical {
            s: s.as_f64(),
            s0: self.s0().as_f64(),
        })
    }
}

/// Critical constants of the laminar family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StreamWindow<T> {
    pub s0: T,
    pub sc: T,
    pub q0: T,
    pub qc: T,
    pub d0: T,
}

/// The two laminar streams sharing the Bernoulli value `q`.
///
/// Note the crossing of indices: the smaller parameter gives the larger depth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DepthPair<T> {
    pub q: T,
    pub s_minus: T,
    pub s_plus: T,
    /// `d(s_plus)`
    pub d_minus: T,
    /// `d(s_minus)`
    pub d_plus: T,
    /// `q` is so close to `Qc` that both roots were collapsed onto `sc`.
    pub degenerate: bool,
}

/// Stream function of the laminar flow, `-omega y^2 / 2 + s y`.
pub fn psi_stream<T: Scalar>(y: T, s: T, omega: T) -> T {
    -T::lit(0.5) * omega * y * y + s * y
}

/// Height at which the laminar stream function equals `p`.
///
/// Lower-branch inverse of [`psi_stream`], written without cancellation.
pub fn laminar_height<T: Scalar>(p: T, s: T, omega: T) -> T {
    let rad = (s * s - T::lit(2.0) * omega * p).max(T::zero());
    T::lit(2.0) * p / (s + rad.sqrt())
}

/// Depth `d(s) = (s - sqrt(s^2 - 2 omega m)) / omega` of the stream with parameter `s`.
pub fn depth_of_s<T: Scalar>(s: T, params: &FluidParams<T>) -> Result<T> {
    let r = params.surface_speed(s)?;
    Ok(T::lit(2.0) * params.m / (s + r))
}

/// Bernoulli constant `Q(s) = s^2/2 - omega m + g d(s)`.
pub fn bernoulli_of_s<T: Scalar>(s: T, params: &FluidParams<T>) -> Result<T> {
    let d = depth_of_s(s, params)?;
    Ok(T::lit(0.5) * s * s - params.omega * params.m + params.g * d)
}

/// `dQ/ds = s - 2 g m / (R (s + R))` with `R` the surface speed.
///
/// Tends to minus infinity as `s -> s0`.
pub fn bernoulli_slope<T: Scalar>(s: T, params: &FluidParams<T>) -> Result<T> {
    let r = params.surface_speed(s)?;
    let two = T::lit(2.0);
    Ok(s - two * params.g * params.m / (r * (s + r)))
}

/// `g ∫_0^m (s^2 - 2 omega p)^{-3/2} dp - 1` in closed form, with its derivative.
fn critical_function<T: Scalar>(s: T, params: &FluidParams<T>) -> (T, T) {
    let two = T::lit(2.0);
    let r = match params.surface_speed(s) {
        Ok(r) => r,
        Err(_) => return (T::infinity(), T::neg_infinity()),
    };
    let den = s * r * (s + r);
    let num = two * params.g * params.m;
    let value = num / den - T::one();
    let dden = two * s * r + s * s * s / r + r * r + two * s * s;
    (value, -num * dden / (den * den))
}

/// The unique minimiser `sc > s0` of `Q(s)`.
pub fn critical_s<T: Scalar>(params: &FluidParams<T>) -> Result<T> {
    params.validate()?;
    let s0 = params.s0();
    let mut hi = T::lit(2.0) * s0;
    let mut tries = 0;
    while critical_function(hi, params).0 > T::zero() {
        hi = hi * T::lit(2.0);
        tries += 1;
        if tries > 200 {
            return Err(Error::RootFinding("critical parameter bracket".into()));
        }
    }
    safeguarded_newton(|s| critical_function(s, params), s0, hi, T::tol(1e-15))
}

pub fn stream_window<T: Scalar>(params: &FluidParams<T>) -> Result<StreamWindow<T>> {
    let sc = critical_s(params)?;
    Ok(StreamWindow {
        s0: params.s0(),
        sc,
        q0: params.q0(),
        qc: bernoulli_of_s(sc, params)?,
        d0: params.d0(),
    })
}

/// Conjugate laminar streams with Bernoulli constant `q`.
///
/// `q` must lie in `(Qc, Q0]`. The closed end `q = Q0` is accepted and gives
/// `s_minus = s0`, `d_plus = d0`; this is the pair the amplitude bound uses.
pub fn depth_pair<T: Scalar>(q: T, params: &FluidParams<T>) -> Result<DepthPair<T>> {
    let w = stream_window(params)?;
    depth_pair_in(q, params, &w)
}

/// [`depth_pair`] with a precomputed window.
pub fn depth_pair_in<T: Scalar>(
    q: T,
    params: &FluidParams<T>,
    w: &StreamWindow<T>,
) -> Result<DepthPair<T>> {
    if !(q > w.qc && q <= w.q0) {
        return Err(Error::OutOfWindow {
            q: q.as_f64(),
            qc: w.qc.as_f64(),
            q0: w.q0.as_f64(),
        });
    }
    if q - w.qc < T::tol(1e-13) * w.q0 {
        let d = depth_of_s(w.sc, params)?;
        return Ok(DepthPair {
            q,
            s_minus: w.sc,
            s_plus: w.sc,
            d_minus: d,
            d_plus: d,
            degenerate: true,
        });
    }
    let rtol = T::tol(1e-15);
    let residual = |s: T| -> (T, T) {
        match (bernoulli_of_s(s, params), bernoulli_slope(s, params)) {
            (Ok(v), Ok(dv)) => (v - q, dv),
            _ => (T::nan(), T::nan()),
        }
    };
    let s_minus = if q == w.q0 {
        w.s0
    } else {
        safeguarded_newton(residual, w.s0, w.sc, rtol)?
    };
    let mut hi = T::lit(2.0) * w.sc;
    let mut doublings = 0;
    while bernoulli_of_s(hi, params)? <= q {
        hi = hi * T::lit(2.0);
        doublings += 1;
        if doublings > 60 {
            return Err(Error::RootFinding(
                "upper conjugate parameter not bracketed after 60 doublings".into(),
            ));
        }
    }
    let s_plus = safeguarded_newton(residual, w.sc, hi, rtol)?;
    Ok(DepthPair {
        q,
        s_minus,
        s_plus,
        d_minus: depth_of_s(s_plus, params)?,
        d_plus: depth_of_s(s_minus, params)?,
        degenerate: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    fn unit() -> FluidParams<f64> {
        FluidParams::<f64>::new(1.0, 1.0, 1.0).unwrap()
    }

    /// Bisection on the defining equation, kept independent of `critical_s`.
    fn sc_by_bisection(p: &FluidParams<f64>) -> f64 {
        let f =
            |s: f64| (p.g / p.omega) * (1.0 / (s * s - 2.0 * p.omega * p.m).sqrt() - 1.0 / s) - 1.0;
        let (mut a, mut b) = (p.s0() * (1.0 + 1e-12), 100.0 * p.s0());
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if f(mid) > 0.0 {
                a = mid
            } else {
                b = mid
            }
        }
        0.5 * (a + b)
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi_stream(0.0, 2.0, 1.0), 0.0);
        assert!((psi_stream(SQRT_2, SQRT_2, 1.0) - 1.0).abs() < 1e-15);
        assert!((psi_stream(1.0_f64, 1.5, 1.0) - 1.0).abs() < 1e-15);
        assert!((laminar_height(1.0_f64, 1.5, 1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn depth_examples() {
        let p = unit();
        assert!((depth_of_s(SQRT_2, &p).unwrap() - SQRT_2).abs() < 1e-15);
        assert!((depth_of_s(1.5, &p).unwrap() - 1.0).abs() < 1e-15);
        let p2 = FluidParams::<f64>::new(1.0, 2.0, 1.0).unwrap();
        let expect = (3.0 - 5f64.sqrt()) / 2.0;
        assert!((depth_of_s(3.0, &p2).unwrap() - expect).abs() < 1e-15);
        assert!((expect - 0.381966).abs() < 1e-6);
    }

    #[test]
    fn below_critical_is_rejected() {
        assert!(matches!(
            depth_of_s(1.0, &unit()),
            Err(Error::BelowCritical { .. })
        ));
        assert!(matches!(
            bernoulli_of_s(1.4, &unit()),
            Err(Error::BelowCritical { .. })
        ));
    }

    #[test]
    fn bernoulli_examples() {
        let p = unit();
        assert!((bernoulli_of_s(SQRT_2, &p).unwrap() - SQRT_2).abs() < 1e-15);
        assert!((bernoulli_of_s(1.5, &p).unwrap() - 1.125).abs() < 1e-15);
        let p2 = FluidParams::<f64>::new(1.0, 2.0, 1.0).unwrap();
        let expect = 4.5 - 2.0 + (3.0 - 5f64.sqrt()) / 2.0;
        assert!((bernoulli_of_s(3.0, &p2).unwrap() - expect).abs() < 1e-14);
    }

    #[test]
    fn critical_matches_bisection() {
        let p = unit();
        let sc = critical_s(&p).unwrap();
        let oracle = sc_by_bisection(&p);
        assert!((sc - oracle).abs() < 1e-12 * oracle);
        assert!((sc - 1.5386).abs() < 1e-4);
        let qc = bernoulli_of_s(sc, &p).unwrap();
        assert!((qc - 1.1162).abs() < 1e-4);
        assert!(bernoulli_slope(sc, &p).unwrap().abs() < 1e-9);
    }

    #[test]
    fn slope_changes_sign_at_sc() {
        for p in [
            unit(),
            FluidParams::<f64>::new(9.81, 3.0, 0.5).unwrap(),
            FluidParams::<f64>::new(0.1, 7.0, 2.0).unwrap(),
        ] {
            let sc = critical_s(&p).unwrap();
            let s0 = p.s0();
            assert!(bernoulli_slope(s0 + 0.999 * (sc - s0), &p).unwrap() < 0.0);
            assert!(bernoulli_slope(sc * 1.001, &p).unwrap() > 0.0);
            assert!(bernoulli_slope(sc, &p).unwrap().abs() < 1e-9 * sc);
        }
    }

    #[test]
    fn window_examples() {
        let w = stream_window(&unit()).unwrap();
        assert!((w.s0 - SQRT_2).abs() < 1e-15);
        assert!((w.d0 - SQRT_2).abs() < 1e-15);
        assert!((w.q0 - SQRT_2).abs() < 1e-15);
        assert!(w.qc < w.q0 && w.s0 < w.sc);
        let w2 = stream_window(&FluidParams::<f64>::new(1.0, 4.0, 2.0).unwrap()).unwrap();
        assert_eq!((w2.s0, w2.d0, w2.q0), (4.0, 1.0, 1.0));
    }

    #[test]
    fn depth_pair_examples() {
        let p = unit();
        let w = stream_window(&p).unwrap();
        let pair = depth_pair(1.3, &p).unwrap();
        assert!((bernoulli_of_s(pair.s_minus, &p).unwrap() - 1.3).abs() < 1e-10);
        assert!((bernoulli_of_s(pair.s_plus, &p).unwrap() - 1.3).abs() < 1e-10);
        assert!(pair.s_minus < w.sc && w.sc < pair.s_plus);
        assert!(pair.d_minus < pair.d_plus);

        let near = depth_pair(w.qc + 1e-15 * w.q0, &p).unwrap();
        assert!(near.degenerate);
        assert_eq!(near.s_minus, w.sc);
        assert_eq!(near.s_plus, w.sc);

        let top = depth_pair(w.q0 * (1.0 - 1e-12), &p).unwrap();
        assert!((top.d_plus - w.d0).abs() < 1e-5);
        let edge = depth_pair(w.q0, &p).unwrap();
        assert!((edge.d_plus - w.d0).abs() < 1e-15 * w.d0);
    }

    #[test]
    fn depth_pair_rejects_outside_window() {
        let p = unit();
        let w = stream_window(&p).unwrap();
        assert!(matches!(
            depth_pair(w.qc, &p),
            Err(Error::OutOfWindow { .. })
        ));
        assert!(matches!(
            depth_pair(w.qc - 0.01, &p),
            Err(Error::OutOfWindow { .. })
        ));
        assert!(matches!(
            depth_pair(w.q0 + 1e-9, &p),
            Err(Error::OutOfWindow { .. })
        ));
    }

    #[test]
    fn invalid_params() {
        assert!(FluidParams::<f64>::new(0.0, 1.0, 1.0).is_err());
        assert!(FluidParams::<f64>::new(1.0, -1.0, 1.0).is_err());
        assert!(FluidParams::<f64>::new(1.0, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn f32_window() {
        let p = FluidParams::<f32>::new(1.0, 1.0, 1.0).unwrap();
        let w = stream_window(&p).unwrap();
        assert!((w.sc - 1.5386).abs() < 1e-3);
        let pair = depth_pair(1.3f32, &p).unwrap();
        assert!(pair.d_minus < pair.d_plus);
    }
}
