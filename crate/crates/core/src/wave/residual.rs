//! Discrete height-function equations.
//!
//! Interior: `(1 + h_x^2) h_pp - 2 h_p h_x h_xp + h_p^2 h_xx - omega h_p^3 = 0`,
//! divided by `h_p^3` and evaluated in the equivalent flux form
//! `(h_x / h_p)_x - ((1 + h_x^2) / (2 h_p^2))_p - omega`, which is
//! `-(Δψ + omega)` at the node: the residual is in units of vorticity.
//! The `p` flux is differenced between half levels of the stretched
//! coordinate (second order), `x` derivatives are spectral. Laminar fields
//! on their own stretched grid satisfy the discrete equations exactly.
//!
//! Surface: `(1 + h_x^2) / (2 h_p^2) + g h - Q = 0` at `p = m`, with a
//! one-sided second-order `tau` derivative.
//!
//! `tau` differences are taken of `h - H`, `H` the reference stream, with
//! the differences of `H` added analytically; this keeps rounding in the
//! stored heights from being amplified by `1/dtau^2`. Likewise the `p` flux
//! of `H` is removed before differencing, its exact difference cancelling
//! `omega`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::grid::{fourier_d1, matvec, HeightField};

/// Max-norms of the discrete residuals in the units of the rescaled
/// problem: the interior residual divided by `omega`, the surface residual
/// by `m omega`. The norms are therefore unchanged by rescaling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualNorms {
    pub interior: f64,
    pub surface: f64,
}

impl ResidualNorms {
    pub fn below(&self, tol_interior: f64, tol_surface: f64) -> bool {
        self.interior < tol_interior && self.surface < tol_surface
    }
}

#[derive(Debug, Clone)]
pub struct HeightResidual {
    /// `n_p x n_x`, row-major, in units of `omega`; bottom and surface rows are zero.
    pub interior: Vec<f64>,
    /// In units of `m omega`.
    pub surface: Vec<f64>,
    pub norms: ResidualNorms,
}

pub(crate) struct Discretization {
    pub n_x: usize,
    pub n_p: usize,
    pub dtau: f64,
    pub d1: Vec<f64>,
    /// `P'(tau_j)` for `j = 0..n_p`
    pub dp_node: Vec<f64>,
    /// `P'(tau_{j+1/2})` for `j = 0..n_p-1`
    pub dp_half: Vec<f64>,
    /// Reference heights `tau_j d_ref`.
    pub href: Vec<f64>,
    /// `d_ref dtau`, the exact spacing of `href`.
    pub dh: f64,
    pub omega: f64,
    pub g: f64,
    pub m: f64,
}

pub(crate) struct Evaluation {
    /// `h_x` at every node
    pub hx: Vec<f64>,
    pub interior: Vec<f64>,
    pub surface: Vec<f64>,
}

impl Discretization {
    pub fn new(field: &HeightField) -> Result<Self> {
        field.check_shape()?;
        let coord = field.coordinate()?;
        let n = field.n_p - 1;
        let dtau = field.dtau();
        let dp_node: Vec<f64> = (0..=n).map(|j| coord.dp_dtau(j as f64 * dtau)).collect();
        let dp_half: Vec<f64> = (0..n)
            .map(|j| coord.dp_dtau((j as f64 + 0.5) * dtau))
            .collect();
        let floor = 1e-12 * dp_node[0];
        if dp_node.iter().chain(&dp_half).any(|&v| !(v > floor)) {
            return Err(Error::InvalidParams(format!(
                "grid parameter {} puts a stagnation point on the grid",
                field.grid_parameter
            )));
        }
        Ok(Self {
            n_x: field.n_x,
            n_p: field.n_p,
            dtau,
            d1: fourier_d1(field.n_x, field.wavelength),
            dp_node,
            dp_half,
            href: (0..=n).map(|j| coord.reference_height(j, n + 1)).collect(),
            dh: coord.depth() * dtau,
            omega: field.params.omega,
            g: field.params.g,
            m: field.params.m,
        })
    }

    #[inline]
    pub fn top(&self) -> usize {
        self.n_p - 1
    }

    /// Deviation from the reference stream at node `(i, j)`.
    #[inline]
    fn u(&self, h: &[f64], i: usize, j: usize) -> f64 {
        h[j * self.n_x + i] - self.href[j]
    }

    /// `h_p` at an interior node, centred in `tau`.
    #[inline]
    pub fn hp_node(&self, h: &[f64], i: usize, j: usize) -> f64 {
        let du = self.u(h, i, j + 1) - self.u(h, i, j - 1);
        (du + 2.0 * self.dh) / (2.0 * self.dtau * self.dp_node[j])
    }

    /// `h_p` between levels `j` and `j+1`.
    #[inline]
    pub fn hp_half(&self, h: &[f64], i: usize, j: usize) -> f64 {
        let du = self.u(h, i, j + 1) - self.u(h, i, j);
        (du + self.dh) / (self.dtau * self.dp_half[j])
    }

    /// One-sided `h_p` at the surface.
    #[inline]
    pub fn hp_surface(&self, h: &[f64], i: usize) -> f64 {
        let t = self.top();
        let du = 3.0 * self.u(h, i, t) - 4.0 * self.u(h, i, t - 1) + self.u(h, i, t - 2);
        (du + 2.0 * self.dh) / (2.0 * self.dtau * self.dp_node[t])
    }

    /// One-sided `h_p` at the bottom.
    #[inline]
    pub fn hp_bottom(&self, h: &[f64], i: usize) -> f64 {
        let du = -3.0 * self.u(h, i, 0) + 4.0 * self.u(h, i, 1) - self.u(h, i, 2);
        (du + 2.0 * self.dh) / (2.0 * self.dtau * self.dp_node[0])
    }

    /// `h_p` at any node.
    pub fn hp_any(&self, h: &[f64], i: usize, j: usize) -> f64 {
        if j == 0 {
            self.hp_bottom(h, i)
        } else if j == self.top() {
            self.hp_surface(h, i)
        } else {
            self.hp_node(h, i, j)
        }
    }

    pub fn check_monotone(&self, h: &[f64]) -> Result<()> {
        let nx = self.n_x;
        for j in 0..self.top() {
            for i in 0..nx {
                let a = h[j * nx + i];
                let b = h[(j + 1) * nx + i];
                if !(b > a) || !b.is_finite() {
                    return Err(Error::Monotonicity { ix: i, ip: j + 1 });
                }
            }
        }
        for i in 0..nx {
            if !(self.hp_surface(h, i) > 0.0) {
                return Err(Error::Monotonicity {
                    ix: i,
                    ip: self.top(),
                });
            }
        }
        Ok(())
    }

    pub fn x_derivatives(&self, h: &[f64]) -> Vec<f64> {
        let nx = self.n_x;
        let mut hx = vec![0.0; h.len()];
        for j in 0..self.n_p {
            matvec(
                &self.d1,
                &h[j * nx..(j + 1) * nx],
                &mut hx[j * nx..(j + 1) * nx],
            );
        }
        hx
    }

    /// `(1 + hxm^2) / (2 sp^2)` on half level `j + 1/2`, less the same flux
    /// of the reference stream. The reference flux differences to exactly
    /// `-omega`, so only the deviation is differenced numerically.
    #[inline]
    pub fn half_flux(&self, h: &[f64], hx: &[f64], i: usize, j: usize) -> f64 {
        let nx = self.n_x;
        let hxm = 0.5 * (hx[j * nx + i] + hx[(j + 1) * nx + i]);
        let sp = self.hp_half(h, i, j);
        let sr = self.dh / (self.dtau * self.dp_half[j]);
        (hxm * hxm * sr * sr + (sr - sp) * (sr + sp)) / (2.0 * sp * sp * sr * sr)
    }

    pub fn evaluate(&self, h: &[f64], q: f64) -> Result<Evaluation> {
        self.check_monotone(h)?;
        let nx = self.n_x;
        let top = self.top();
        let hx = self.x_derivatives(h);
        let mut interior = vec![0.0; h.len()];
        let mut b = vec![0.0; nx];
        let mut bx = vec![0.0; nx];
        for j in 1..top {
            for i in 0..nx {
                b[i] = hx[j * nx + i] / self.hp_node(h, i, j);
            }
            matvec(&self.d1, &b, &mut bx);
            let inv = 1.0 / (self.dtau * self.dp_node[j]);
            for i in 0..nx {
                let ap = (self.half_flux(h, &hx, i, j) - self.half_flux(h, &hx, i, j - 1)) * inv;
                interior[j * nx + i] = bx[i] - ap;
            }
        }
        let surface = (0..nx)
            .map(|i| {
                let hxs = hx[top * nx + i];
                let hp = self.hp_surface(h, i);
                (1.0 + hxs * hxs) / (2.0 * hp * hp) + self.g * h[top * nx + i] - q
            })
            .collect();
        Ok(Evaluation {
            hx,
            interior,
            surface,
        })
    }
}

impl Evaluation {
    /// Scales the residuals to the units of [`ResidualNorms`].
    pub fn rescale(&mut self, disc: &Discretization) {
        let (a, b) = (1.0 / disc.omega, 1.0 / (disc.m * disc.omega));
        self.interior.iter_mut().for_each(|v| *v *= a);
        self.surface.iter_mut().for_each(|v| *v *= b);
    }
}

impl Discretization {
    pub fn norms(&self, ev: &Evaluation) -> ResidualNorms {
        ResidualNorms {
            interior: max_abs(&ev.interior) / self.omega,
            surface: max_abs(&ev.surface) / (self.m * self.omega),
        }
    }
}

pub(crate) fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| {
        if x.abs() > m || x.is_nan() {
            x.abs()
        } else {
            m
        }
    })
}

/// Discrete residual of the height-function problem.
pub fn height_residual(field: &HeightField) -> Result<HeightResidual> {
    let disc = Discretization::new(field)?;
    let mut ev = disc.evaluate(&field.values, field.bernoulli)?;
    let norms = disc.norms(&ev);
    ev.rescale(&disc);
    Ok(HeightResidual {
        interior: ev.interior,
        surface: ev.surface,
        norms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream_flows::FluidParams;
    use crate::wave::grid::stream_height;

    #[test]
    fn laminar_fields_are_exact() {
        for (p, s) in [
            (FluidParams::<f64>::new(1.0, 1.0, 1.0).unwrap(), 1.5),
            (FluidParams::<f64>::new(9.81, 3.0, 0.5).unwrap(), 2.2),
            (FluidParams::<f64>::new(1.0, 8.0, 1.0).unwrap(), 4.2),
        ] {
            for (nx, np) in [(64, 41), (64, 201)] {
                let f = stream_height(&p, s, 3.0, nx, np).unwrap();
                let r = height_residual(&f).unwrap();
                assert!(r.norms.interior < 1e-12, "{:?} {s} {nx} {np}", r.norms);
                assert!(r.norms.surface < 1e-12, "{:?}", r.norms);
            }
        }
    }

    #[test]
    fn perturbed_field_has_residual() {
        let p = FluidParams::<f64>::new(1.0, 1.0, 1.0).unwrap();
        let mut f = stream_height(&p, 1.5, 4.0, 32, 21).unwrap();
        for j in 0..f.n_p {
            let pj = f.p_level(j).unwrap();
            for i in 0..f.n_x {
                let x = f.x(i);
                f.values[j * f.n_x + i] += 0.01 * (2.0 * std::f64::consts::PI * x / 4.0).sin() * pj;
            }
        }
        let r = height_residual(&f).unwrap();
        assert!(r.norms.interior > 1e-4 && r.norms.surface > 1e-4);
    }

    #[test]
    fn folded_profile_is_rejected() {
        let p = FluidParams::<f64>::new(1.0, 1.0, 1.0).unwrap();
        let mut f = stream_height(&p, 1.5, 4.0, 16, 11).unwrap();
        f.values[5 * 16 + 3] = f.values[4 * 16 + 3] - 0.01;
        assert!(matches!(
            height_residual(&f),
            Err(Error::Monotonicity { ix: 3, ip: 5 })
        ));
    }

    #[test]
    fn stagnant_grid_is_rejected() {
        let p = FluidParams::<f64>::new(1.0, 1.0, 1.0).unwrap();
        let f = stream_height(&p, p.s0(), 4.0, 16, 11).unwrap();
        assert!(height_residual(&f).is_err());
    }
}
