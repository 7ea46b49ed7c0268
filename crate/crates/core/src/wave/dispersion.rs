//! Linearisation about laminar streams and the bifurcation condition.
//!
//! A small perturbation `h = H(p) + a w(p) cos(k x)` of the laminar stream
//! with parameter `s` solves the linearised problem when, written in the
//! laminar height `y = H(p)` with speed `U(y) = s - omega y`,
//!
//! ```text
//! (U^2 w')' = k^2 U^2 w,   w(0) = 0,   U(d)^2 w'(d) = g w(d).
//! ```
//!
//! The boundary-value problem is solved by shooting from the bottom.

use crate::error::{Error, Result};
use crate::roots::bisect;
use crate::stream_flows::{critical_s, depth_of_s, FluidParams};

const SHOOTING_STEPS: usize = 4000;

/// State `(w, U^2 w')` after integrating from `y0` to `y1`.
fn shoot(
    params: &FluidParams<f64>,
    k: f64,
    s: f64,
    y0: f64,
    y1: f64,
    state: (f64, f64),
    steps: usize,
) -> (f64, f64) {
    let speed2 = |y: f64| {
        let u = s - params.omega * y;
        u * u
    };
    let rhs = |y: f64, (w, f): (f64, f64)| {
        let u2 = speed2(y);
        (f / u2, k * k * u2 * w)
    };
    let hstep = (y1 - y0) / steps as f64;
    let (mut w, mut f) = state;
    for n in 0..steps {
        let y = y0 + n as f64 * hstep;
        let k1 = rhs(y, (w, f));
        let k2 = rhs(
            y + 0.5 * hstep,
            (w + 0.5 * hstep * k1.0, f + 0.5 * hstep * k1.1),
        );
        let k3 = rhs(
            y + 0.5 * hstep,
            (w + 0.5 * hstep * k2.0, f + 0.5 * hstep * k2.1),
        );
        let k4 = rhs(y + hstep, (w + hstep * k3.0, f + hstep * k3.1));
        w += hstep / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        f += hstep / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
    }
    (w, f)
}

/// Normalised dispersion function `(U^2 w' - g w) / (|U^2 w'| + g |w|)` at
/// the surface, for wavenumber `k` and laminar parameter `s`.
///
/// Negative as `s -> s0`, positive for large `s`; its zero is the bifurcation
/// parameter.
pub fn dispersion_function(params: &FluidParams<f64>, k: f64, s: f64) -> Result<f64> {
    let d = depth_of_s(s, params)?;
    let s2 = s * s;
    let (w, f) = shoot(params, k, s, 0.0, d, (0.0, s2), SHOOTING_STEPS);
    let gw = params.g * w;
    Ok((f - gw) / (f.abs() + gw.abs()))
}

/// Laminar parameter `s* > s0` at which wavenumber `2 pi / L` bifurcates.
pub fn bifurcation_point(params: &FluidParams<f64>, wavelength: f64) -> Result<f64> {
    params.validate()?;
    if !(wavelength.is_finite() && wavelength > 0.0) {
        return Err(Error::InvalidParams(format!(
            "wavelength must be positive, got {wavelength}"
        )));
    }
    let k = 2.0 * std::f64::consts::PI / wavelength;
    let not_found = || Error::BifurcationNotFound { wavelength };
    let s0 = params.s0();
    let lo = s0 * (1.0 + 1e-9);
    if dispersion_function(params, k, lo)? >= 0.0 {
        return Err(not_found());
    }
    let mut hi = critical_s(params)?;
    let mut doublings = 0;
    while dispersion_function(params, k, hi)? <= 0.0 {
        hi *= 2.0;
        doublings += 1;
        if doublings > 60 {
            return Err(not_found());
        }
    }
    let f = |s: f64| dispersion_function(params, k, s).unwrap_or(f64::NAN);
    bisect(f, lo, hi, 1e-14 * hi).map_err(|_| not_found())
}

/// Wavelength whose bifurcation parameter is `s`, for `s0 < s < sc`.
pub fn wavelength_for_parameter(params: &FluidParams<f64>, s: f64) -> Result<f64> {
    params.validate()?;
    let sc = critical_s(params)?;
    if !(s > params.s0() && s < sc) {
        return Err(Error::Domain {
            what: "laminar parameter",
            value: s,
            domain: "(s0, sc)",
        });
    }
    let d = depth_of_s(s, params)?;
    let mut lo = 1e-6 / d;
    let mut hi = 1.0 / d;
    let mut tries = 0;
    while dispersion_function(params, lo, s)? >= 0.0 {
        lo *= 0.1;
        tries += 1;
        if tries > 20 {
            return Err(Error::RootFinding(
                "long-wave end of the dispersion bracket".into(),
            ));
        }
    }
    tries = 0;
    while dispersion_function(params, hi, s)? <= 0.0 {
        hi *= 2.0;
        tries += 1;
        if tries > 60 {
            return Err(Error::RootFinding(
                "short-wave end of the dispersion bracket".into(),
            ));
        }
    }
    let f = |k: f64| dispersion_function(params, k, s).unwrap_or(f64::NAN);
    let k = bisect(f, lo, hi, 1e-14 * hi)?;
    Ok(2.0 * std::f64::consts::PI / k)
}

/// Midpoint `(s0 + sc) / 2` of the subcritical window and its bifurcating wavelength.
pub fn mid_window_wavelength(params: &FluidParams<f64>) -> Result<(f64, f64)> {
    let s = 0.5 * (params.s0() + critical_s(params)?);
    Ok((s, wavelength_for_parameter(params, s)?))
}

/// Linear mode `w` at the given ascending laminar heights, normalised to
/// `w(d) = 1` at the surface.
pub fn linear_mode(params: &FluidParams<f64>, k: f64, s: f64, heights: &[f64]) -> Result<Vec<f64>> {
    let d = depth_of_s(s, params)?;
    let per_unit = SHOOTING_STEPS as f64 / d;
    let mut out = Vec::with_capacity(heights.len());
    let mut y = 0.0;
    let mut state = (0.0, s * s);
    for &target in heights {
        let steps = (((target - y) * per_unit).ceil() as usize).max(1);
        if target > y {
            state = shoot(params, k, s, y, target, state, steps);
            y = target;
        }
        out.push(state.0);
    }
    let w_top = if d > y {
        let steps = (((d - y) * per_unit).ceil() as usize).max(1);
        shoot(params, k, s, y, d, state, steps).0
    } else {
        state.0
    };
    Ok(out.into_iter().map(|w| w / w_top).collect())
}
