//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use wavebound::FluidParams;

/// Adaptive Simpson quadrature on `[a, b]`.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn step<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// Plain bisection on a sign change.
pub fn bisection<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    assert!(flo * f(hi) <= 0.0, "no sign change on [{lo}, {hi}]");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Depth of the laminar stream by quadrature of `∫_0^m (s^2 - 2 omega p)^{-1/2} dp`.
pub fn depth_by_quadrature(s: f64, p: &FluidParams) -> f64 {
    let f = |q: f64| 1.0 / (s * s - 2.0 * p.omega * q).sqrt();
    simpson(&f, 0.0, p.m, 1e-14 * p.m / s)
}

/// Bernoulli constant `s^2/2 - omega m + g d` with `d` from the plain formula.
pub fn bernoulli_plain(s: f64, p: &FluidParams) -> f64 {
    let d = (s - (s * s - 2.0 * p.omega * p.m).sqrt()) / p.omega;
    0.5 * s * s - p.omega * p.m + p.g * d
}

/// Critical parameter from the integral condition
/// `(g/omega) (1/sqrt(s^2 - 2 omega m) - 1/s) = 1`, by bisection.
pub fn critical_by_bisection(p: &FluidParams) -> f64 {
    let s0 = (2.0 * p.omega * p.m).sqrt();
    let f = |s: f64| p.g / p.omega * (1.0 / (s * s - 2.0 * p.omega * p.m).sqrt() - 1.0 / s) - 1.0;
    let mut hi = 2.0 * s0;
    while f(hi) > 0.0 {
        hi *= 2.0;
    }
    bisection(f, s0 * (1.0 + 1e-15), hi)
}

/// Nondimensional Bernoulli function `d^2/8 + 1/(2 d^2) - 1/2 + eps d`.
pub fn q_tilde(d: f64, eps: f64) -> f64 {
    d * d / 8.0 + 0.5 / (d * d) - 0.5 + eps * d
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
