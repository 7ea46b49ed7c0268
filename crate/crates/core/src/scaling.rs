//! Nondimensionalisation that scales mass flux and vorticity to one.
//!
//! Lengths are multiplied by `lambda = (omega / m)^{1/2}`, the stream
//! function is divided by `m`, and the Bernoulli constant by `m omega`.
//! The rescaled problem has vorticity 1, flux 1 and gravity
//! `epsilon = g / (m^{1/2} omega^{3/2})`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::stream_flows::FluidParams;
use crate::wave::{HeightField, WaveField};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NondimParams<T> {
    pub epsilon: T,
    pub lambda: T,
    pub q_tilde: Option<T>,
}

pub fn nondimensionalize<T: Scalar>(params: &FluidParams<T>, q: Option<T>) -> NondimParams<T> {
    NondimParams {
        epsilon: params.g / (params.m.sqrt() * params.omega.powf(T::lit(1.5))),
        lambda: (params.omega / params.m).sqrt(),
        q_tilde: q.map(|q| q / (params.m * params.omega)),
    }
}

/// Parameters `(epsilon, 1, 1)` of the rescaled problem.
pub fn nondim_fluid<T: Scalar>(params: &FluidParams<T>) -> FluidParams<T> {
    FluidParams {
        g: nondimensionalize(params, None).epsilon,
        omega: T::one(),
        m: T::one(),
    }
}

/// `d(s) = s - sqrt(s^2 - 2)` for unit flux and vorticity.
pub fn d_tilde_of_s<T: Scalar>(s_tilde: T) -> Result<T> {
    let two = T::lit(2.0);
    let rad = (s_tilde - T::SQRT_2()) * (s_tilde + T::SQRT_2());
    let rad = if rad.abs() < T::tol(1e-14) * s_tilde * s_tilde {
        T::zero()
    } else if rad > T::zero() {
        rad
    } else {
        return Err(Error::BelowCritical {
            s: s_tilde.as_f64(),
            s0: std::f64::consts::SQRT_2,
        });
    };
    Ok(two / (s_tilde + rad.sqrt()))
}

/// Inverse of [`d_tilde_of_s`]: `s(d) = d/2 + 1/d` on `(0, sqrt 2)`.
pub fn s_of_d_tilde<T: Scalar>(d_tilde: T) -> Result<T> {
    if !(d_tilde > T::zero() && d_tilde < T::SQRT_2()) {
        return Err(Error::Domain {
            what: "nondimensional depth",
            value: d_tilde.as_f64(),
            domain: "(0, sqrt 2)",
        });
    }
    Ok(d_tilde / T::lit(2.0) + d_tilde.recip())
}

/// `Q(d) = d^2/8 + 1/(2 d^2) - 1/2 + epsilon d` without the domain check.
#[inline]
pub(crate) fn q_tilde_raw<T: Scalar>(d: T, epsilon: T) -> T {
    let half = T::lit(0.5);
    d * d / T::lit(8.0) + half / (d * d) - half + epsilon * d
}

/// Derivative of [`q_tilde_raw`] in `d`.
#[inline]
pub(crate) fn q_tilde_slope<T: Scalar>(d: T, epsilon: T) -> T {
    d / T::lit(4.0) - (d * d * d).recip() + epsilon
}

/// Nondimensional Bernoulli constant of the stream with depth `d_tilde in (0, sqrt 2]`.
pub fn q_tilde_of_d<T: Scalar>(d_tilde: T, epsilon: T) -> Result<T> {
    if !(d_tilde > T::zero() && d_tilde <= T::SQRT_2()) {
        return Err(Error::Domain {
            what: "nondimensional depth",
            value: d_tilde.as_f64(),
            domain: "(0, sqrt 2]",
        });
    }
    Ok(q_tilde_raw(d_tilde, epsilon))
}

fn check_same_params(a: &FluidParams<f64>, b: &FluidParams<f64>) -> Result<()> {
    if a != b {
        return Err(Error::InvalidParams(format!(
            "wave carries {a:?} but {b:?} was supplied"
        )));
    }
    Ok(())
}

/// Rescales a dimensional wave to the unit-flux, unit-vorticity problem.
///
/// Grid nodes scale linearly, so no resampling takes place; residual norms
/// are already in rescaled units and carry over unchanged.
pub fn map_wave_to_nondim(wave: &WaveField, params: &FluidParams<f64>) -> Result<WaveField> {
    check_same_params(&wave.field.params, params)?;
    let nd = nondimensionalize(params, None);
    let lam = nd.lambda;
    let mw = params.m * params.omega;
    let f = &wave.field;
    Ok(WaveField {
        field: HeightField {
            params: nondim_fluid(params),
            wavelength: lam * f.wavelength,
            bernoulli: f.bernoulli / mw,
            n_x: f.n_x,
            n_p: f.n_p,
            grid_parameter: f.grid_parameter / mw.sqrt(),
            values: f.values.iter().map(|h| lam * h).collect(),
        },
        eta: wave.eta.iter().map(|e| lam * e).collect(),
        residual: wave.residual,
    })
}

/// Inverse of [`map_wave_to_nondim`].
pub fn map_wave_from_nondim(wave: &WaveField, params: &FluidParams<f64>) -> Result<WaveField> {
    check_same_params(&wave.field.params, &nondim_fluid(params))?;
    let lam = nondimensionalize(params, None).lambda;
    let mw = params.m * params.omega;
    let f = &wave.field;
    Ok(WaveField {
        field: HeightField {
            params: *params,
            wavelength: f.wavelength / lam,
            bernoulli: f.bernoulli * mw,
            n_x: f.n_x,
            n_p: f.n_p,
            grid_parameter: f.grid_parameter * mw.sqrt(),
            values: f.values.iter().map(|h| h / lam).collect(),
        },
        eta: wave.eta.iter().map(|e| e / lam).collect(),
        residual: wave.residual,
    })
}
