//! Velocities and derived diagnostics of computed waves.
//!
//! With `psi_y = c - u`, `psi_x = v` and `psi(x, h(x, p)) = p`:
//! `psi_y = 1 / h_p` and `psi_x = -h_x / h_p`.

use crate::error::Result;

use super::field::WaveField;
use super::grid::{fourier_d1, matvec, HeightField};
use super::residual::{max_abs, Discretization};

/// Velocity samples at the grid nodes (row-major like the height grid).
#[derive(Debug, Clone)]
pub struct VelocityField {
    pub n_x: usize,
    pub n_p: usize,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

/// `(psi_x, psi_y)` at every node.
fn stream_gradient(field: &HeightField) -> Result<(Vec<f64>, Vec<f64>)> {
    let disc = Discretization::new(field)?;
    disc.check_monotone(&field.values)?;
    let hx = disc.x_derivatives(&field.values);
    let nx = field.n_x;
    let mut px = vec![0.0; field.values.len()];
    let mut py = vec![0.0; field.values.len()];
    for j in 0..field.n_p {
        for i in 0..nx {
            let hp = disc.hp_any(&field.values, i, j);
            px[j * nx + i] = -hx[j * nx + i] / hp;
            py[j * nx + i] = 1.0 / hp;
        }
    }
    Ok((px, py))
}

/// `u = c - psi_y`, `v = psi_x` in the frame moving with speed `c`.
pub fn velocity_from_stream(wave: &WaveField, c: f64) -> Result<VelocityField> {
    let f = &wave.field;
    let (px, py) = stream_gradient(f)?;
    let nx = f.n_x;
    let x = (0..f.values.len()).map(|k| f.x(k % nx)).collect();
    Ok(VelocityField {
        n_x: nx,
        n_p: f.n_p,
        x,
        y: f.values.clone(),
        u: py.iter().map(|p| c - p).collect(),
        v: px,
    })
}

/// Smallest `psi_y` over the grid; approaches zero near stagnation.
pub fn min_vertical_speed(field: &HeightField) -> Result<f64> {
    let (_, py) = stream_gradient(field)?;
    Ok(py.iter().copied().fold(f64::INFINITY, f64::min))
}

/// Max of `|laplacian(psi) + omega|` over interior nodes, computed from the
/// reconstructed velocity field rather than the height equation. The rows
/// next to the bottom and the surface are skipped: differencing the
/// one-sided boundary gradients there is only first order.
pub fn vorticity_residual(field: &HeightField) -> Result<f64> {
    let disc = Discretization::new(field)?;
    let (px, py) = stream_gradient(field)?;
    let nx = field.n_x;
    let h = &field.values;
    let hx = disc.x_derivatives(h);
    let mut dpx_dx = vec![0.0; nx];
    let mut out = Vec::with_capacity(nx * field.n_p);
    for j in 2..disc.top().saturating_sub(1) {
        matvec(&disc.d1, &px[j * nx..(j + 1) * nx], &mut dpx_dx);
        let inv = 1.0 / (2.0 * disc.dtau * disc.dp_node[j]);
        for i in 0..nx {
            let hp = disc.hp_node(h, i, j);
            let px_p = (px[(j + 1) * nx + i] - px[(j - 1) * nx + i]) * inv;
            let py_p = (py[(j + 1) * nx + i] - py[(j - 1) * nx + i]) * inv;
            let psi_xx = dpx_dx[i] - px_p * hx[j * nx + i] / hp;
            let psi_yy = py_p / hp;
            out.push(psi_xx + psi_yy + field.params.omega);
        }
    }
    Ok(max_abs(&out))
}

/// Max of `|v - (u - c) eta_x|` along the surface, with `eta_x` from the profile.
pub fn surface_kinematic_residual(wave: &WaveField, c: f64) -> Result<f64> {
    let vel = velocity_from_stream(wave, c)?;
    let nx = vel.n_x;
    let d1 = fourier_d1(nx, wave.field.wavelength);
    let mut eta_x = vec![0.0; nx];
    matvec(&d1, &wave.eta, &mut eta_x);
    let top = (vel.n_p - 1) * nx;
    let r: Vec<f64> = (0..nx)
        .map(|i| vel.v[top + i] - (vel.u[top + i] - c) * eta_x[i])
        .collect();
    Ok(max_abs(&r))
}
