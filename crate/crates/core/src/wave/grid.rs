//! Height-function grids.
//!
//! A steady unidirectional wave is described by `h(x, p)`, the height at
//! which the stream function takes the value `p`. The strip
//! `[0, L) x [0, m]` is sampled uniformly in `x` and uniformly in a
//! stretched coordinate `tau in [0, 1]`, with
//! `p = P(tau) = psi_stream(tau d_ref; s_ref)`: the laminar stream with
//! parameter `s_ref` is then exactly linear in `tau`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stream_flows::{bernoulli_of_s, depth_of_s, FluidParams};

/// Heights `h(x_i, p_j)` on a periodic, stretched grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeightField {
    pub params: FluidParams<f64>,
    pub wavelength: f64,
    /// Bernoulli constant `Q`.
    pub bernoulli: f64,
    pub n_x: usize,
    pub n_p: usize,
    /// Laminar parameter `s_ref` defining the vertical coordinate.
    pub grid_parameter: f64,
    /// Row-major, one row of `n_x` values per `p` level, bottom row first.
    pub values: Vec<f64>,
}

/// Stretched vertical coordinate `p = P(tau)`.
#[derive(Debug, Clone, Copy)]
pub struct StreamCoordinate {
    s_ref: f64,
    d_ref: f64,
    omega: f64,
    m: f64,
}

impl StreamCoordinate {
    pub fn new(params: &FluidParams<f64>, s_ref: f64) -> Result<Self> {
        Ok(Self {
            s_ref,
            d_ref: depth_of_s(s_ref, params)?,
            omega: params.omega,
            m: params.m,
        })
    }

    pub fn depth(&self) -> f64 {
        self.d_ref
    }

    pub fn p(&self, tau: f64) -> f64 {
        if tau >= 1.0 {
            return self.m;
        }
        let y = tau * self.d_ref;
        -0.5 * self.omega * y * y + self.s_ref * y
    }

    /// Height of level `j` of `n_p` in the reference stream, `tau_j d_ref`.
    pub fn reference_height(&self, j: usize, n_p: usize) -> f64 {
        if j + 1 == n_p {
            self.d_ref
        } else {
            j as f64 / (n_p - 1) as f64 * self.d_ref
        }
    }

    /// `dP/dtau = d_ref (s_ref - omega d_ref tau)`.
    pub fn dp_dtau(&self, tau: f64) -> f64 {
        self.d_ref * (self.s_ref - self.omega * self.d_ref * tau)
    }
}

pub(crate) fn check_grid(n_x: usize, n_p: usize) -> Result<()> {
    if n_x < 8 || !n_x.is_multiple_of(2) {
        return Err(Error::InvalidParams(format!(
            "n_x must be even and at least 8, got {n_x}"
        )));
    }
    if n_p < 5 {
        return Err(Error::InvalidParams(format!(
            "n_p must be at least 5, got {n_p}"
        )));
    }
    Ok(())
}

impl HeightField {
    pub fn coordinate(&self) -> Result<StreamCoordinate> {
        StreamCoordinate::new(&self.params, self.grid_parameter)
    }

    pub fn dtau(&self) -> f64 {
        1.0 / (self.n_p - 1) as f64
    }

    pub fn tau(&self, j: usize) -> f64 {
        if j + 1 == self.n_p {
            1.0
        } else {
            j as f64 * self.dtau()
        }
    }

    /// Stream-function value of level `j`.
    pub fn p_level(&self, j: usize) -> Result<f64> {
        Ok(self.coordinate()?.p(self.tau(j)))
    }

    pub fn x(&self, i: usize) -> f64 {
        self.wavelength * i as f64 / self.n_x as f64
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.n_x + i]
    }

    pub fn level(&self, j: usize) -> &[f64] {
        &self.values[j * self.n_x..(j + 1) * self.n_x]
    }

    /// Surface row `h(x, m)`.
    pub fn surface(&self) -> &[f64] {
        self.level(self.n_p - 1)
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.wavelength
    }

    /// Validates shapes and the flat-bottom invariant.
    pub fn check_shape(&self) -> Result<()> {
        check_grid(self.n_x, self.n_p)?;
        self.params.validate()?;
        if !(self.wavelength.is_finite() && self.wavelength > 0.0) {
            return Err(Error::InvalidParams(format!(
                "wavelength must be positive, got {}",
                self.wavelength
            )));
        }
        if self.values.len() != self.n_x * self.n_p {
            return Err(Error::InvalidParams(format!(
                "expected {} height values, got {}",
                self.n_x * self.n_p,
                self.values.len()
            )));
        }
        if self.level(0).iter().any(|&h| h != 0.0) {
            return Err(Error::InvalidParams("bottom row must be zero".into()));
        }
        Ok(())
    }

    /// Errors unless `h` strictly increases with `p` in every column.
    pub fn check_monotone(&self) -> Result<()> {
        for j in 0..self.n_p - 1 {
            for i in 0..self.n_x {
                let (lo, hi) = (self.at(i, j), self.at(i, j + 1));
                if !(hi > lo) || !hi.is_finite() {
                    return Err(Error::Monotonicity { ix: i, ip: j + 1 });
                }
            }
        }
        Ok(())
    }

    /// Crest-to-trough half height `(h(0, m) - h(L/2, m)) / 2`.
    pub fn half_height(&self) -> f64 {
        let s = self.surface();
        0.5 * (s[0] - s[self.n_x / 2])
    }

    /// Node-wise copy keeping every `fx`-th column and `fp`-th level.
    pub fn restrict(&self, fx: usize, fp: usize) -> Result<HeightField> {
        if fx == 0 || fp == 0 || !self.n_x.is_multiple_of(fx) || !(self.n_p - 1).is_multiple_of(fp)
        {
            return Err(Error::InvalidParams(format!(
                "cannot restrict a {}x{} grid by ({fx}, {fp})",
                self.n_x, self.n_p
            )));
        }
        let n_x = self.n_x / fx;
        let n_p = (self.n_p - 1) / fp + 1;
        let mut values = Vec::with_capacity(n_x * n_p);
        for j in 0..n_p {
            for i in 0..n_x {
                values.push(self.at(i * fx, j * fp));
            }
        }
        Ok(HeightField {
            n_x,
            n_p,
            values,
            ..self.clone()
        })
    }
}

/// Laminar field `h(p) = (s - sqrt(s^2 - 2 omega p)) / omega`, with `Q = Q(s)`.
///
/// The grid is stretched with `s_ref = s`, so the nodes are `tau_j d(s)`.
pub fn stream_height(
    params: &FluidParams<f64>,
    s: f64,
    wavelength: f64,
    n_x: usize,
    n_p: usize,
) -> Result<HeightField> {
    check_grid(n_x, n_p)?;
    params.validate()?;
    let coord = StreamCoordinate::new(params, s)?;
    let bernoulli = bernoulli_of_s(s, params)?;
    let mut values = Vec::with_capacity(n_x * n_p);
    for j in 0..n_p {
        values.extend(std::iter::repeat_n(coord.reference_height(j, n_p), n_x));
    }
    Ok(HeightField {
        params: *params,
        wavelength,
        bernoulli,
        n_x,
        n_p,
        grid_parameter: s,
        values,
    })
}

/// Fourier differentiation matrix (row-major, `n x n`) on `n` equispaced
/// points of a period `period`. `n` must be even.
pub fn fourier_d1(n: usize, period: f64) -> Vec<f64> {
    let h = 2.0 * std::f64::consts::PI / n as f64;
    let scale = 2.0 * std::f64::consts::PI / period;
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let k = i as isize - j as isize;
                let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                d[i * n + j] = scale * 0.5 * sign / (0.5 * k as f64 * h).tan();
            }
        }
    }
    d
}

/// `out = D v` for a differentiation matrix with zero row sums, evaluated
/// as `sum_j d_ij (v_j - v_i)` so that constants map to exactly zero.
#[inline]
pub(crate) fn matvec(d: &[f64], v: &[f64], out: &mut [f64]) {
    let n = v.len();
    for (i, o) in out.iter_mut().enumerate() {
        let row = &d[i * n..(i + 1) * n];
        let vi = v[i];
        *o = row.iter().zip(v).map(|(a, b)| a * (b - vi)).sum();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream_flows::laminar_height;

    #[test]
    fn spectral_derivative_of_trig() {
        let n = 16;
        let l = 3.0;
        let d = fourier_d1(n, l);
        let k = 2.0 * std::f64::consts::PI / l;
        let v: Vec<f64> = (0..n)
            .map(|i| (2.0 * k * l * i as f64 / n as f64).sin())
            .collect();
        let mut dv = vec![0.0; n];
        matvec(&d, &v, &mut dv);
        for (i, dvi) in dv.iter().enumerate() {
            let x = l * i as f64 / n as f64;
            assert!((dvi - 2.0 * k * (2.0 * k * x).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn stream_height_matches_profile() {
        let p = FluidParams::<f64>::new(1.0, 1.0, 1.0).unwrap();
        let f = stream_height(&p, 1.5, 2.0, 8, 11).unwrap();
        assert!((f.surface()[3] - 1.0).abs() < 1e-15);
        for j in 0..f.n_p {
            let pj = f.p_level(j).unwrap();
            assert!((f.at(0, j) - laminar_height(pj, 1.5, 1.0)).abs() < 1e-15);
        }
        assert!((laminar_height(0.5, 1.5, 1.0) - (1.5 - 1.25f64.sqrt())).abs() < 1e-15);
        assert!((laminar_height(0.5_f64, 1.5, 1.0) - 0.381966).abs() < 1e-6);
        assert!((f.bernoulli - 1.125).abs() < 1e-15);
        f.check_monotone().unwrap();
    }

    #[test]
    fn coordinate_endpoints() {
        let p = FluidParams::<f64>::new(2.0, 3.0, 0.7).unwrap();
        let c = StreamCoordinate::new(&p, 3.0).unwrap();
        assert_eq!(c.p(0.0), 0.0);
        assert!((c.p(1.0 - 1e-15) - 0.7).abs() < 1e-12);
        assert!(c.dp_dtau(1.0) > 0.0);
    }

    #[test]
    fn restriction_keeps_nodes() {
        let p = FluidParams::<f64>::new(1.0, 1.0, 1.0).unwrap();
        let f = stream_height(&p, 1.5, 2.0, 16, 9).unwrap();
        let r = f.restrict(2, 4).unwrap();
        assert_eq!((r.n_x, r.n_p), (8, 3));
        assert_eq!(r.at(1, 1), f.at(2, 4));
        assert!(f.restrict(3, 1).is_err());
    }
}
